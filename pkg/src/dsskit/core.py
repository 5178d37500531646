"""Difference systems of sets: data model and exact parameter verification.

A q-ary difference system of sets (DSS) over Z_n is a family of q disjoint
subsets Q_0..Q_{q-1} of {0..n-1}.  Its difference profile counts, for each
nonzero residue t, how many ordered cross-set pairs (a, b) with a in Q_i,
b in Q_j, i != j satisfy a - b = t (mod n).  The index rho is the minimum of
those counts; the redundancy r is the total number of marker elements.

Two independent computations of the profile are provided: a naive O(r^2)
enumeration and a transform-based O(q n log n) path, cross-checked exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ArityError, DomainError, OverlapError, RangeError

# Past this many cross pairs the FFT path wins; see profile().
_NAIVE_PAIR_BUDGET = 16.0


@dataclass(frozen=True)
class Dss:
    """A q-ary DSS over Z_n. ``sets`` holds q strictly increasing tuples."""

    n: int
    q: int
    sets: tuple[tuple[int, ...], ...]

    @classmethod
    def from_sets(cls, n: int, sets) -> "Dss":
        """Build a Dss from any iterables, sorting each member set."""
        tidy = tuple(tuple(sorted(int(x) for x in s)) for s in sets)
        return cls(n=int(n), q=len(tidy), sets=tidy)

    @property
    def redundancy(self) -> int:
        return sum(len(s) for s in self.sets)

    def to_json_dict(self) -> dict:
        return {"n": self.n, "q": self.q, "sets": [list(s) for s in self.sets]}

    @classmethod
    def from_json_dict(cls, obj: dict) -> "Dss":
        dss = cls(
            n=int(obj["n"]),
            q=int(obj["q"]),
            sets=tuple(tuple(int(x) for x in s) for s in obj["sets"]),
        )
        validate(dss)
        return dss


@dataclass(eq=False)
class DifferenceProfile:
    """Per-shift external difference counts and their minimum over t >= 1.

    ``counts[t]`` is the number of ordered cross-set pairs with difference t;
    ``counts[0]`` is always 0 (the sets are disjoint) and is excluded from the
    index.  For the degenerate n = 1 there are no nonzero residues and the
    index is the +inf sentinel.
    """

    counts: np.ndarray
    index: float

    @property
    def degenerate(self) -> bool:
        return math.isinf(self.index)

    def __eq__(self, other):
        if not isinstance(other, DifferenceProfile):
            return NotImplemented
        return self.index == other.index and np.array_equal(self.counts, other.counts)


@dataclass(frozen=True)
class DssReport:
    """Verified parameters of a DSS plus the Levenshtein bound comparison."""

    n: int
    q: int
    r: int
    rho: float
    levenshtein_bound: float
    meets_bound_with_equality: bool
    redundancy_rate: float
    relative_index: float
    degenerate: bool

    def to_json_dict(self) -> dict:
        rho = None if self.degenerate else int(self.rho)
        rel = None if self.degenerate else self.relative_index
        return {
            "n": self.n,
            "q": self.q,
            "r": self.r,
            "rho": rho,
            "levenshtein_bound": self.levenshtein_bound,
            "meets_bound_with_equality": self.meets_bound_with_equality,
            "redundancy_rate": self.redundancy_rate,
            "relative_index": rel,
            "degenerate": self.degenerate,
        }


def validate(dss: Dss) -> None:
    """Raise unless ``dss`` satisfies all structural invariants.

    Raises:
        DomainError: n < 1 or q < 2.
        ArityError: number of sets differs from q.
        RangeError: an element is outside [0, n-1] or a set is not strictly
            increasing.
        OverlapError: two sets share an element.
    """
    if dss.n < 1:
        raise DomainError(f"n must be >= 1, got {dss.n}")
    if dss.q < 2:
        raise DomainError(f"q must be >= 2, got {dss.q}")
    if len(dss.sets) != dss.q:
        raise ArityError(f"expected {dss.q} sets, got {len(dss.sets)}")
    seen: dict[int, int] = {}
    for j, s in enumerate(dss.sets):
        prev = -1
        for x in s:
            if not 0 <= x < dss.n:
                raise RangeError(f"element {x} of set {j} outside [0, {dss.n - 1}]")
            if x <= prev:
                raise RangeError(f"set {j} is not strictly increasing at {x}")
            prev = x
            if x in seen:
                raise OverlapError(x, seen[x], j)
            seen[x] = j


def difference_profile(dss: Dss) -> DifferenceProfile:
    """Exact difference profile by O(r^2) enumeration of ordered cross pairs."""
    validate(dss)
    n = dss.n
    counts = np.zeros(n, dtype=np.int64)
    arrays = [np.asarray(s, dtype=np.int64) for s in dss.sets]
    for i, a in enumerate(arrays):
        for j, b in enumerate(arrays):
            if i == j or a.size == 0 or b.size == 0:
                continue
            diffs = (a[:, None] - b[None, :]) % n
            counts += np.bincount(diffs.ravel(), minlength=n)
    return _finish_profile(dss, counts)


def difference_profile_fast(dss: Dss) -> DifferenceProfile:
    """Same profile via cyclic autocorrelations, O(q n log n).

    counts[t] = autocorr(all-marker indicator)[t] - sum_s autocorr(symbol-s
    indicator)[t].  Correlations are computed with a real FFT; results are
    rounded to integers and the residual is asserted below 1e-6, falling back
    to the naive path otherwise.
    """
    validate(dss)
    n = dss.n
    total = np.zeros(n, dtype=np.float64)
    union = np.zeros(n, dtype=np.float64)
    for s in dss.sets:
        ind = np.zeros(n, dtype=np.float64)
        if s:
            ind[np.asarray(s, dtype=np.int64)] = 1.0
        union += ind
        total -= _cyclic_autocorr(ind)
    total += _cyclic_autocorr(union)
    rounded = np.round(total)
    if np.max(np.abs(total - rounded)) >= 1e-6:
        return difference_profile(dss)
    return _finish_profile(dss, rounded.astype(np.int64))


def profile(dss: Dss, method: str = "auto") -> DifferenceProfile:
    """Dispatch between the naive and fast paths.

    ``auto`` picks naive while r^2 <= 16 q n log2(n), fast otherwise.
    """
    if method == "naive":
        return difference_profile(dss)
    if method == "fast":
        return difference_profile_fast(dss)
    if method != "auto":
        raise ValueError(f"unknown profile method {method!r}")
    r = dss.redundancy
    budget = _NAIVE_PAIR_BUDGET * dss.q * dss.n * max(1.0, math.log2(dss.n))
    if r * r <= budget:
        return difference_profile(dss)
    return difference_profile_fast(dss)


def levenshtein_bound(n: int, q: int, rho: int) -> float:
    """Lower bound sqrt(q rho (n-1) / (q-1)) on the redundancy of any DSS."""
    if q < 2:
        raise DomainError(f"q must be >= 2, got {q}")
    if n < 1:
        raise DomainError(f"n must be >= 1, got {n}")
    if rho < 0:
        raise DomainError(f"rho must be >= 0, got {rho}")
    return math.sqrt(q * rho * (n - 1) / (q - 1))


def report(dss: Dss, method: str = "auto") -> DssReport:
    """Verify ``dss`` and aggregate its parameters against the bound."""
    prof = profile(dss, method=method)
    n, q, r = dss.n, dss.q, dss.redundancy
    if prof.degenerate:
        return DssReport(
            n=n, q=q, r=r, rho=math.inf, levenshtein_bound=0.0,
            meets_bound_with_equality=False, redundancy_rate=r / n,
            relative_index=math.inf, degenerate=True,
        )
    rho = int(prof.index)
    bound = levenshtein_bound(n, q, rho)
    # Exact integer form of r >= bound and of equality.
    lhs = r * r * (q - 1)
    rhs = q * rho * (n - 1)
    if rho >= 1:
        assert lhs >= rhs, "Levenshtein bound violated: profile computation bug"
    return DssReport(
        n=n, q=q, r=r, rho=rho, levenshtein_bound=bound,
        meets_bound_with_equality=(lhs == rhs), redundancy_rate=r / n,
        relative_index=rho / n, degenerate=False,
    )


def _cyclic_autocorr(x: np.ndarray) -> np.ndarray:
    f = np.fft.rfft(x)
    return np.fft.irfft(f * np.conj(f), len(x))


def _finish_profile(dss: Dss, counts: np.ndarray) -> DifferenceProfile:
    assert counts[0] == 0, "disjoint sets cannot produce a zero difference"
    r = dss.redundancy
    expected_total = r * r - sum(len(s) ** 2 for s in dss.sets)
    assert int(counts.sum()) == expected_total, "profile total mismatch"
    index = math.inf if dss.n == 1 else float(counts[1:].min())
    return DifferenceProfile(counts=counts, index=index)
