"""Self-synchronizing codes built from a DSS template and a pluggable block code.

A DSS over Z_n becomes a template sequence of length n over the marker
alphabet {0..q-1} plus the wildcard * (represented internally as -1): symbol
j sits at the positions of member set j, wildcards fill the remaining n-r
positions.  Writing codewords of any block error-correcting code of length
n-r into the wildcard slots yields a code whose comma-free index is at least
the DSS index rho, so frame misalignment is detectable by watching the r
marker positions alone.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .core import DifferenceProfile, Dss, profile, validate
from .errors import (
    EccFailure,
    LengthMismatch,
    PayloadLengthError,
    TooLarge,
    WindowTooShort,
)

WILDCARD = -1

_LOCATE_CHUNK = 256


def h(x: int, y: int) -> int:
    """1 iff both arguments are non-wildcard markers and differ, else 0."""
    return 1 if (x != WILDCARD and y != WILDCARD and x != y) else 0


@dataclass(eq=False)
class TemplateSequence:
    """Length-n sequence over {0..q-1, WILDCARD} encoding a DSS by position."""

    n: int
    q: int
    symbols: np.ndarray

    def __post_init__(self):
        self.symbols = np.asarray(self.symbols, dtype=np.int64)
        if self.symbols.shape != (self.n,):
            raise LengthMismatch(
                f"expected {self.n} symbols, got {self.symbols.size}"
            )

    def __eq__(self, other):
        if not isinstance(other, TemplateSequence):
            return NotImplemented
        return (
            self.n == other.n
            and self.q == other.q
            and np.array_equal(self.symbols, other.symbols)
        )

    @property
    def marker_positions(self) -> np.ndarray:
        return np.flatnonzero(self.symbols != WILDCARD)

    @property
    def wildcard_positions(self) -> np.ndarray:
        return np.flatnonzero(self.symbols == WILDCARD)

    @property
    def redundancy(self) -> int:
        return int((self.symbols != WILDCARD).sum())


def template_from_dss(dss: Dss) -> TemplateSequence:
    """symbols[i] = j iff i is in member set j, wildcard elsewhere."""
    validate(dss)
    symbols = np.full(dss.n, WILDCARD, dtype=np.int64)
    for j, s in enumerate(dss.sets):
        if s:
            symbols[np.asarray(s, dtype=np.int64)] = j
    return TemplateSequence(n=dss.n, q=dss.q, symbols=symbols)


def dss_from_template(template: TemplateSequence) -> Dss:
    """Inverse of :func:`template_from_dss`."""
    sets = [
        tuple(int(i) for i in np.flatnonzero(template.symbols == j))
        for j in range(template.q)
    ]
    return Dss(n=template.n, q=template.q, sets=tuple(sets))


def correlation_profile(template: TemplateSequence) -> DifferenceProfile:
    """counts[t] = sum_i h(v_i, v_{i+t mod n}); the template-path oracle.

    Deliberately a direct O(n^2) evaluation, independent of the set-based
    difference profile it must equal.
    """
    v = template.symbols
    n = template.n
    marker = v != WILDCARD
    counts = np.empty(n, dtype=np.int64)
    for t in range(n):
        shifted = np.roll(v, -t)
        counts[t] = int((marker & np.roll(marker, -t) & (v != shifted)).sum())
    index = math.inf if n == 1 else float(counts[1:].min())
    return DifferenceProfile(counts=counts, index=index)


# --- sequence text format ----------------------------------------------------

def format_symbols(symbols, q: int) -> str:
    """One char per symbol ('0'-'9', '*') for q <= 10, comma-separated otherwise."""
    vals = [int(s) for s in symbols]
    if q <= 10:
        return "".join("*" if s == WILDCARD else str(s) for s in vals)
    return ",".join("*" if s == WILDCARD else str(s) for s in vals)


def parse_symbols(text: str, q: int) -> np.ndarray:
    """Inverse of :func:`format_symbols`; validates symbols against q."""
    text = text.strip()
    if q <= 10:
        toks = list(text)
    else:
        toks = [t.strip() for t in text.split(",")] if text else []
    out = np.empty(len(toks), dtype=np.int64)
    for i, tok in enumerate(toks):
        if tok == "*":
            out[i] = WILDCARD
            continue
        val = int(tok)
        if not 0 <= val < q:
            raise ValueError(f"symbol {val} outside alphabet of size {q}")
        out[i] = val
    return out


# --- pluggable block codes ----------------------------------------------------

class BlockCode:
    """Contract for payload codes: (k, block_length, q, d, encode, decode)."""

    k: int
    block_length: int
    q: int
    d: int

    def encode(self, payload: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def decode(self, block: np.ndarray) -> tuple[np.ndarray, int]:
        """Return (payload, corrected-error count); raise EccFailure if stuck."""
        raise NotImplementedError

    def _check_payload(self, payload) -> np.ndarray:
        payload = np.asarray(payload, dtype=np.int64)
        if payload.shape != (self.k,):
            raise PayloadLengthError(
                f"payload must have {self.k} symbols, got {payload.size}"
            )
        if payload.size and ((payload < 0).any() or (payload >= self.q).any()):
            raise ValueError(f"payload symbol outside alphabet of size {self.q}")
        return payload


class IdentityCode(BlockCode):
    """No-redundancy code: k = block_length, minimum distance 1."""

    def __init__(self, block_length: int, q: int):
        self.k = block_length
        self.block_length = block_length
        self.q = q
        self.d = 1

    def encode(self, payload):
        return self._check_payload(payload).copy()

    def decode(self, block):
        block = np.asarray(block, dtype=np.int64)
        if block.shape != (self.block_length,):
            raise LengthMismatch(
                f"block must have {self.block_length} symbols, got {block.size}"
            )
        return block.copy(), 0


class RepetitionCode(BlockCode):
    """Each payload symbol repeated ``repeat`` times; majority decode, d = repeat.

    With block_length not divisible by ``repeat`` the trailing positions are
    constant-0 filler carrying no payload.  A majority tie raises EccFailure;
    corrections are counted against the re-encoded codeword, filler included.
    """

    def __init__(self, block_length: int, q: int, repeat: int):
        if repeat < 1:
            raise ValueError(f"repeat must be >= 1, got {repeat}")
        self.block_length = block_length
        self.q = q
        self.repeat = repeat
        self.k = block_length // repeat
        self.d = repeat

    def encode(self, payload):
        payload = self._check_payload(payload)
        out = np.zeros(self.block_length, dtype=np.int64)
        out[: self.k * self.repeat] = np.repeat(payload, self.repeat)
        return out

    def decode(self, block):
        block = np.asarray(block, dtype=np.int64)
        if block.shape != (self.block_length,):
            raise LengthMismatch(
                f"block must have {self.block_length} symbols, got {block.size}"
            )
        payload = np.empty(self.k, dtype=np.int64)
        for j in range(self.k):
            votes = np.bincount(block[j * self.repeat : (j + 1) * self.repeat],
                                minlength=self.q)
            top = votes.max()
            if (votes == top).sum() > 1:
                raise EccFailure(f"majority tie in payload group {j}")
            payload[j] = int(votes.argmax())
        corrections = int((block != self.encode(payload)).sum())
        return payload, corrections


def ecc_from_config(cfg: dict, block_length: int, q: int) -> BlockCode:
    """Build a block code from its JSON config {"kind": ..., ...}."""
    kind = cfg.get("kind")
    if kind == "identity":
        return IdentityCode(block_length, q)
    if kind == "repetition":
        return RepetitionCode(block_length, q, repeat=int(cfg["repeat"]))
    raise ValueError(f"unknown ecc kind {kind!r}")


def ecc_to_config(ecc: BlockCode) -> dict:
    if isinstance(ecc, IdentityCode):
        return {"kind": "identity"}
    if isinstance(ecc, RepetitionCode):
        return {"kind": "repetition", "repeat": ecc.repeat}
    raise ValueError(f"cannot serialize ecc of type {type(ecc).__name__}")


# --- self-synchronizing code ---------------------------------------------------

@dataclass(frozen=True)
class AlignmentEstimate:
    """Best frame offset in a window, judged on marker positions only."""

    offset: int
    marker_mismatches: int
    confident: bool

    def to_json_dict(self) -> dict:
        return {
            "offset": self.offset,
            "marker_mismatches": self.marker_mismatches,
            "confident": self.confident,
        }


class SyncCode:
    """A DSS template combined with a block code over the wildcard slots."""

    def __init__(self, template: TemplateSequence, ecc: BlockCode, rho: float):
        if ecc.block_length != template.n - template.redundancy:
            raise LengthMismatch(
                f"ecc block length {ecc.block_length} != "
                f"{template.n - template.redundancy} wildcard positions"
            )
        if ecc.q != template.q:
            raise ValueError("ecc alphabet size differs from template alphabet")
        self.template = template
        self.ecc = ecc
        self.rho = rho
        self._markers = template.marker_positions
        self._marker_symbols = template.symbols[self._markers]
        self._slots = template.wildcard_positions

    @classmethod
    def build(cls, dss: Dss, ecc: BlockCode) -> "SyncCode":
        template = template_from_dss(dss)
        rho = profile(dss).index
        return cls(template, ecc, rho)

    @property
    def n(self) -> int:
        return self.template.n

    @property
    def q(self) -> int:
        return self.template.q

    @property
    def tolerance(self) -> int:
        """Largest per-window substitution count the alignment guarantee covers."""
        if math.isinf(self.rho):
            return 0
        return (int(self.rho) - 1) // 2 if self.rho >= 1 else 0

    def to_json_dict(self) -> dict:
        return {
            "dss": dss_from_template(self.template).to_json_dict(),
            "ecc": ecc_to_config(self.ecc),
        }

    @classmethod
    def from_json_dict(cls, obj: dict) -> "SyncCode":
        dss = Dss.from_json_dict(obj["dss"])
        block_length = dss.n - dss.redundancy
        ecc = ecc_from_config(obj["ecc"], block_length, dss.q)
        return cls.build(dss, ecc)


def encode(code: SyncCode, payload) -> np.ndarray:
    """ECC-encode ``payload`` and splice it into the wildcard slots."""
    block = code.ecc.encode(payload)
    frame = code.template.symbols.copy()
    frame[code._slots] = block
    return frame


def decode_payload(code: SyncCode, frame) -> tuple[np.ndarray, int]:
    """Extract the wildcard-slot symbols of one frame and ECC-decode them.

    Returns (payload, corrected-error count); raises EccFailure when the
    block code cannot decode.
    """
    frame = np.asarray(frame, dtype=np.int64)
    if frame.shape != (code.n,):
        raise LengthMismatch(f"frame must have {code.n} symbols, got {frame.size}")
    return code.ecc.decode(frame[code._slots])


def locate_frame(code: SyncCode, window) -> AlignmentEstimate:
    """Find the frame boundary in a window of n..2n-1 symbols.

    Scans every candidate offset whose full frame fits in the window and
    counts mismatches on the r marker positions only (O(n r) total).  Returns
    the offset with the fewest mismatches, smallest offset on ties; confident
    iff that count is within floor((rho-1)/2).
    """
    window = np.asarray(window, dtype=np.int64)
    n = code.n
    if window.size < n:
        raise WindowTooShort(f"window of {window.size} symbols; need at least {n}")
    n_offsets = min(n, window.size - n + 1)
    markers = code._markers
    symbols = code._marker_symbols
    best_offset = 0
    best = None
    for start in range(0, n_offsets, _LOCATE_CHUNK):
        offsets = np.arange(start, min(start + _LOCATE_CHUNK, n_offsets))
        mism = (window[offsets[:, None] + markers[None, :]]
                != symbols[None, :]).sum(axis=1)
        i = int(mism.argmin())
        if best is None or mism[i] < best:
            best = int(mism[i])
            best_offset = int(offsets[i])
    return AlignmentEstimate(
        offset=best_offset,
        marker_mismatches=best,
        confident=best <= code.tolerance,
    )


def codebook(code: SyncCode, max_codewords: int) -> np.ndarray:
    """All q^k codewords as a (|C|, n) array; TooLarge over ``max_codewords``."""
    size = code.q ** code.ecc.k
    if size > max_codewords:
        raise TooLarge(f"codebook of {size} codewords exceeds cap {max_codewords}")
    words = np.empty((size, code.n), dtype=np.int64)
    for i, payload in enumerate(itertools.product(range(code.q), repeat=code.ecc.k)):
        words[i] = encode(code, np.array(payload, dtype=np.int64))
    return words


def comma_free_index_bruteforce(code: SyncCode, max_codewords: int = 4096):
    """Exact comma-free index by enumerating every codeword-splice pair.

    A splice takes the last n-t digits of one codeword followed by the first
    t digits of another, 1 <= t <= n-1.  Returns the minimum Hamming distance
    between any codeword and any splice; +inf sentinel when n = 1 (no cuts).
    """
    words = codebook(code, max_codewords)
    n = code.n
    if n == 1:
        return math.inf
    size = len(words)
    best = n + 1
    splices = np.empty((size, n), dtype=np.int64)
    for t in range(1, n):
        for x in range(size):
            # Splices of (words[x], y) at cut t, for every y.
            splices[:, : n - t] = words[x, t:]
            splices[:, n - t :] = words[:, :t]
            dists = (splices[:, None, :] != words[None, :, :]).sum(axis=2)
            best = min(best, int(dists.min()))
    return best
