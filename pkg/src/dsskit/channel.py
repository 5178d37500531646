"""Seeded substitution-noise simulator for q-ary symbol streams.

Two modes: independent per-symbol errors at a fixed rate, or exactly
``budget`` errors in every disjoint length-``window`` block.  A corrupted
position always receives a symbol different from the original, uniform over
the q-1 alternatives.  Wildcards never appear on the wire; the channel
operates on fully encoded streams only.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import DomainError
from .rng import RandomStream, Seed


@dataclass(frozen=True)
class NoiseSpec:
    """Noise model: mode 'iid_rate' (uses rate) or 'exact_per_window' (uses
    budget errors per disjoint length-``window`` block)."""

    mode: str
    seed: Seed
    rate: float = 0.0
    budget: int = 0
    window: Optional[int] = None

    def __post_init__(self):
        if self.mode not in ("iid_rate", "exact_per_window"):
            raise DomainError(f"unknown noise mode {self.mode!r}")
        if self.mode == "iid_rate" and not 0.0 <= self.rate <= 1.0:
            raise DomainError(f"rate must be in [0, 1], got {self.rate}")
        if self.mode == "exact_per_window":
            if self.window is None or self.window < 1:
                raise DomainError("exact_per_window mode needs a window length >= 1")
            if not 0 <= self.budget <= self.window:
                raise DomainError(
                    f"budget must be in [0, {self.window}], got {self.budget}"
                )


def corrupt(stream, spec: NoiseSpec, q: int) -> tuple[np.ndarray, list[int]]:
    """Apply substitution noise; returns (corrupted copy, error positions).

    Deterministic given the seed.  Draw order: iid mode consumes one flip
    decision per position, then one replacement draw per flipped position in
    ascending order; exact mode consumes, per window in order, ``budget``
    positions from a shrinking candidate pool, then replacements in ascending
    position order.  A trailing partial window receives min(budget, length)
    errors.
    """
    if q < 2:
        raise DomainError(f"q must be >= 2, got {q}")
    stream = np.asarray(stream, dtype=np.int64)
    if stream.size and ((stream < 0).any() or (stream >= q).any()):
        raise DomainError(f"stream symbol outside alphabet of size {q}")
    rng = RandomStream(spec.seed)
    if spec.mode == "iid_rate":
        positions = np.flatnonzero(rng.bernoulli_mask(stream.size, spec.rate))
    else:
        positions = []
        for start in range(0, stream.size, spec.window):
            length = min(spec.window, stream.size - start)
            pool = list(range(start, start + length))
            for _ in range(min(spec.budget, length)):
                pool_idx = rng.randbelow(len(pool))
                positions.append(pool.pop(pool_idx))
        positions = np.array(sorted(positions), dtype=np.int64)
    out = stream.copy()
    for pos in positions:
        delta = 1 + rng.randbelow(q - 1)
        out[pos] = (out[pos] + delta) % q
    return out, [int(p) for p in positions]
