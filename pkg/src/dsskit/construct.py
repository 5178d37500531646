"""Linear-time randomized DSS construction and its quantitative predictions.

The construction fills q blocks of consecutive integers with balanced sizes
(total floor(n p)), shuffles (0..n-1) once, and maps each block through the
shuffled sequence.  Each per-shift difference count Y_t then has an exact,
shift-independent expectation, and perturbing one shuffle choice moves Y_t by
at most 6, which feeds a McDiarmid lower-tail estimate of how far below the
expectation a single shift can fall.
"""

from __future__ import annotations

import csv
import math
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

import numpy as np

from .core import Dss, profile
from .errors import DegenerateConstructionWarning, DomainError, RangeError, TargetUnreached
from .rng import Seed
from .shuffle import apply_trace, sample_trace


@dataclass(frozen=True)
class ConstructionConfig:
    """Parameters of one randomized construction.

    The redundancy may be given as a fraction ``p`` (r = floor(n p)) or as
    ``r`` directly, not both.
    """

    n: int
    q: int
    p: Optional[float] = None
    r: Optional[int] = None
    target_index: Optional[int] = None
    max_attempts: int = 1000
    seed: Seed = field(default_factory=lambda: Seed(0))

    def __post_init__(self):
        if self.n < 2:
            raise RangeError(f"n must be >= 2, got {self.n}")
        if self.q < 2:
            raise DomainError(f"q must be >= 2, got {self.q}")
        if (self.p is None) == (self.r is None):
            raise DomainError("exactly one of p and r must be given")
        if self.p is not None and not 0.0 < self.p < 1.0:
            raise DomainError(f"p must be in (0, 1), got {self.p}")
        r = self.redundancy
        if not 1 <= r <= self.n:
            raise RangeError(f"redundancy {r} outside [1, {self.n}]")
        if self.target_index is not None and not 0 <= self.target_index <= self.n:
            raise RangeError(f"target_index {self.target_index} outside [0, {self.n}]")
        if self.max_attempts < 1:
            raise RangeError(f"max_attempts must be >= 1, got {self.max_attempts}")

    @property
    def redundancy(self) -> int:
        return self.r if self.r is not None else int(self.n * self.p)

    @property
    def default_target(self) -> int:
        """ceil(E(Y_t) - n^(2/3)) clamped to >= 0: the high-probability floor."""
        value = expected_index(self.n, self.q, self.redundancy) - self.n ** (2 / 3)
        return max(0, math.ceil(value))


@dataclass(frozen=True)
class ConstructionOutcome:
    dss: Dss
    achieved_index: int
    attempts_used: int
    trace_seed: Seed
    expectation: float
    predicted_slack: float


def balanced_allocation(n: int, q: int, r: int) -> list[int]:
    """Split r markers into q sizes of floor(r/q) or floor(r/q)+1.

    Exactly r mod q sets get the larger size, assigned to the lowest symbol
    indices.
    """
    if q < 2:
        raise DomainError(f"q must be >= 2, got {q}")
    if not 0 <= r <= n:
        raise RangeError(f"r must be in [0, {n}], got {r}")
    a, b = divmod(r, q)
    return [a + 1 if j < b else a for j in range(q)]


def construct_once(config: ConstructionConfig) -> ConstructionOutcome:
    """One shot of the randomized construction, verified exactly.

    Builds blocks of consecutive integers with balanced sizes, shuffles
    (0..n-1) with a single trace drawn from ``config.seed``, maps each block
    through the shuffled sequence, then computes the achieved index with the
    automatic naive/fast profile.
    """
    dss = _random_dss(config.n, config.q, config.redundancy, config.seed)
    achieved = profile(dss).index
    return ConstructionOutcome(
        dss=dss,
        achieved_index=int(achieved),
        attempts_used=1,
        trace_seed=config.seed,
        expectation=expected_index(config.n, config.q, config.redundancy),
        predicted_slack=config.n ** (2 / 3),
    )


def construct_with_target(config: ConstructionConfig) -> ConstructionOutcome:
    """Retry :func:`construct_once` until the target index is reached.

    Attempt i draws from the substream (master_seed, i), so enlarging
    ``max_attempts`` never perturbs earlier attempts.  When the target is
    unset, the default high-probability floor is used.  Raises
    TargetUnreached (carrying the best attempt) on exhaustion.
    """
    target = config.target_index
    if target is None:
        target = config.default_target
    best: Optional[ConstructionOutcome] = None
    for attempt in range(config.max_attempts):
        seed = config.seed.substream(attempt)
        outcome = construct_once(_with_seed(config, seed))
        outcome = _with_attempts(outcome, attempt + 1)
        if best is None or outcome.achieved_index > best.achieved_index:
            best = outcome
        if outcome.achieved_index >= target:
            return outcome
    raise TargetUnreached(best, target, config.max_attempts)


def expected_index(n: int, q: int, r: int) -> float:
    """Exact E(Y_t) for the balanced construction; independent of t.

    With r = a q + b, the probability that two distinct positions hold
    markers of different symbols is
    (b (a+1) (r-a-1) + (q-b) a (r-a)) / (n (n-1)), and E(Y_t) is n times
    that.  Evaluated in rational arithmetic before conversion.
    """
    if n < 2:
        raise RangeError(f"n must be >= 2, got {n}")
    if q < 2:
        raise DomainError(f"q must be >= 2, got {q}")
    if not 0 <= r <= n:
        raise RangeError(f"r must be in [0, {n}], got {r}")
    a, b = divmod(r, q)
    numer = b * (a + 1) * (r - a - 1) + (q - b) * a * (r - a)
    return float(Fraction(numer, n - 1))


def mcdiarmid_tail(n: int, deviation: float) -> float:
    """Upper bound on Pr(Y_t <= E(Y_t) - deviation) for one shift.

    The n-1 shuffle choices are independent and each moves Y_t by at most
    c = 6 (two perturbed permutations differ in at most 3 positions, each
    position touching two h-terms), giving exp(-2 dev^2 / (36 (n-1))).
    """
    if n < 2:
        raise DomainError(f"n must be >= 2, got {n}")
    if deviation <= 0:
        raise DomainError(f"deviation must be > 0, got {deviation}")
    return math.exp(-2.0 * deviation * deviation / (36.0 * (n - 1)))


def mcdiarmid_union_tail(n: int, deviation: float) -> float:
    """Union bound over all n-1 shifts: (n-1) times the single-shift tail."""
    return (n - 1) * mcdiarmid_tail(n, deviation)


def p_for_relative_index(q: int, delta: float) -> float:
    """Redundancy fraction p = sqrt(q delta / (q-1)) targeting relative index delta.

    The asymptotic argument adds an unspecified o(1) correction; this helper
    sets it to zero and leaves the gap to the retry loop.
    """
    if q < 2:
        raise DomainError(f"q must be >= 2, got {q}")
    if not 0.0 < delta < 1.0 - 1.0 / q:
        raise DomainError(f"delta must be in (0, 1 - 1/q), got {delta}")
    return math.sqrt(q * delta / (q - 1))


@dataclass
class IndexStatistics:
    """Monte-Carlo summary of achieved indexes over independent substreams."""

    n: int
    q: int
    p: float
    r: int
    trials: int
    master_seed: int
    expectation: float
    denominator: float  # n (1 - 1/q) p^2, the asymptotic index scale
    indexes: np.ndarray  # per-trial achieved index (min over shifts)
    y1: np.ndarray       # per-trial Y_1 = counts[1]

    @property
    def min_index(self) -> int:
        return int(self.indexes.min())

    @property
    def max_index(self) -> int:
        return int(self.indexes.max())

    @property
    def mean_index(self) -> float:
        return float(self.indexes.mean())

    @property
    def median_index(self) -> float:
        return float(np.median(self.indexes))

    @property
    def median_ratio(self) -> float:
        return self.median_index / self.denominator

    @property
    def mean_y1(self) -> float:
        return float(self.y1.mean())

    @property
    def stderr_y1(self) -> float:
        if self.trials < 2:
            return 0.0
        return float(self.y1.std(ddof=1) / math.sqrt(self.trials))

    @property
    def histogram(self) -> dict[int, int]:
        vals, freq = np.unique(self.indexes, return_counts=True)
        return {int(v): int(c) for v, c in zip(vals, freq)}

    def ratios(self) -> np.ndarray:
        return self.indexes / self.denominator

    def to_csv(self, fileobj) -> None:
        writer = csv.writer(fileobj)
        writer.writerow(["trial", "seed", "achieved_index", "expectation", "ratio"])
        ratios = self.ratios()
        for t in range(self.trials):
            writer.writerow([
                t,
                f"{self.master_seed}:{t}",
                int(self.indexes[t]),
                repr(self.expectation),
                repr(float(ratios[t])),
            ])

    def to_json_dict(self) -> dict:
        return {
            "n": self.n,
            "q": self.q,
            "p": self.p,
            "r": self.r,
            "trials": self.trials,
            "expectation": self.expectation,
            "min": self.min_index,
            "max": self.max_index,
            "mean": self.mean_index,
            "median": self.median_index,
            "median_ratio": self.median_ratio,
            "mean_y1": self.mean_y1,
            "stderr_y1": self.stderr_y1,
            "histogram": {str(k): v for k, v in sorted(self.histogram.items())},
        }


def min_index_statistics(
    n: int, q: int, p: float, trials: int, seed: Seed
) -> IndexStatistics:
    """Run ``trials`` independent constructions and summarize their indexes.

    Trial i draws from substream (master_seed, i); aggregation is keyed by
    trial index, so results are identical under any execution order.
    """
    if trials < 1:
        raise RangeError(f"trials must be >= 1, got {trials}")
    config = ConstructionConfig(n=n, q=q, p=p, seed=seed)
    r = config.redundancy
    indexes = np.empty(trials, dtype=np.int64)
    y1 = np.empty(trials, dtype=np.int64)
    for t in range(trials):
        dss = _random_dss(n, q, r, seed.substream(t))
        prof = profile(dss)
        indexes[t] = int(prof.index)
        y1[t] = int(prof.counts[1])
    return IndexStatistics(
        n=n, q=q, p=p, r=r, trials=trials, master_seed=seed.master_seed,
        expectation=expected_index(n, q, r),
        denominator=n * (1.0 - 1.0 / q) * p * p,
        indexes=indexes, y1=y1,
    )


def _random_dss(n: int, q: int, r: int, seed: Seed) -> Dss:
    sizes = balanced_allocation(n, q, r)
    if r < q:
        warnings.warn(
            f"redundancy {r} < q = {q}: some member sets will be empty",
            DegenerateConstructionWarning,
            stacklevel=3,
        )
    trace = sample_trace(n, seed)
    shuffled = apply_trace(list(range(n)), trace)
    sets = []
    start = 0
    for size in sizes:
        sets.append(tuple(sorted(shuffled[start : start + size])))
        start += size
    return Dss(n=n, q=q, sets=tuple(sets))


def _with_seed(config: ConstructionConfig, seed: Seed) -> ConstructionConfig:
    return ConstructionConfig(
        n=config.n, q=config.q, p=config.p, r=config.r,
        target_index=config.target_index, max_attempts=config.max_attempts,
        seed=seed,
    )


def _with_attempts(outcome: ConstructionOutcome, attempts: int) -> ConstructionOutcome:
    return ConstructionOutcome(
        dss=outcome.dss,
        achieved_index=outcome.achieved_index,
        attempts_used=attempts,
        trace_seed=outcome.trace_seed,
        expectation=outcome.expectation,
        predicted_slack=outcome.predicted_slack,
    )
