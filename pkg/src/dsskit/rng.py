"""Reproducible randomness: keyed counter-based streams with unbiased bounded draws.

Every randomized operation in the package draws from a :class:`RandomStream`
keyed by a :class:`Seed` (master seed plus substream index).  The underlying
generator is numpy's Philox-4x64 bit generator, whose raw 64-bit output stream
is fixed for a given key across platforms and numpy versions.  Only the raw
stream is consumed here; bounded integers are derived with rejection sampling
(retry on values at or above the largest multiple of the bound), so draws are
exactly uniform with no modulo bias.

Monte-Carlo callers derive one substream per trial (``stream_index`` = trial
number), so results cannot depend on execution order or parallelism.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

_UINT64_MAX = np.uint64(2**64 - 1)
_CHUNK = 8192


@dataclass(frozen=True)
class Seed:
    """Key of a random substream: (master_seed, stream_index), both uint64."""

    master_seed: int
    stream_index: int = 0

    def __post_init__(self):
        for name in ("master_seed", "stream_index"):
            v = getattr(self, name)
            if not 0 <= int(v) < 2**64:
                raise ValueError(f"{name} must be a 64-bit unsigned integer, got {v}")

    def substream(self, index: int) -> "Seed":
        """Seed for substream ``index`` under the same master seed."""
        return Seed(self.master_seed, index)

    def __str__(self):
        return f"{self.master_seed}:{self.stream_index}"


class RandomStream:
    """Sequential consumer of the keyed Philox raw 64-bit stream.

    Not thread-safe; use one instance per thread / trial.
    """

    def __init__(self, seed: Seed):
        self.seed = seed
        key = np.array([seed.master_seed, seed.stream_index], dtype=np.uint64)
        self._bitgen = np.random.Philox(key=key)
        self._buf = np.empty(0, dtype=np.uint64)
        self._pos = 0

    def raw(self, count: int) -> np.ndarray:
        """Next ``count`` raw uint64 values, in stream order."""
        out = np.empty(count, dtype=np.uint64)
        filled = 0
        while filled < count:
            if self._pos >= len(self._buf):
                self._buf = self._bitgen.random_raw(max(_CHUNK, count - filled))
                self._pos = 0
            take = min(count - filled, len(self._buf) - self._pos)
            out[filled : filled + take] = self._buf[self._pos : self._pos + take]
            self._pos += take
            filled += take
        return out

    def next_raw(self) -> int:
        if self._pos >= len(self._buf):
            self._buf = self._bitgen.random_raw(_CHUNK)
            self._pos = 0
        v = int(self._buf[self._pos])
        self._pos += 1
        return v

    def randbelow(self, bound: int) -> int:
        """Uniform integer in [0, bound) via rejection; bound >= 1."""
        if bound < 1:
            raise ValueError(f"bound must be >= 1, got {bound}")
        # Accept raw < limit where limit = 2^64 - (2^64 mod bound).
        limit = 2**64 - (2**64 % bound)
        while True:
            v = self.next_raw()
            if v < limit:
                return v % bound

    def randbelow_many(self, bounds: np.ndarray) -> np.ndarray:
        """Uniform integers, one per entry of ``bounds`` (each >= 1).

        One raw value is drawn per entry; rejected entries are retried in
        ascending index order afterwards, keeping consumption deterministic.
        """
        bounds = np.asarray(bounds, dtype=np.uint64)
        if bounds.size and int(bounds.min()) < 1:
            raise ValueError("all bounds must be >= 1")
        raws = self.raw(bounds.size)
        # 2^64 mod b == ((2^64 - 1) mod b + 1) mod b, all within uint64.
        m = (_UINT64_MAX % bounds + np.uint64(1)) % bounds
        accept = raws <= _UINT64_MAX - m
        out = (raws % bounds).astype(np.int64)
        if not accept.all():
            for i in np.flatnonzero(~accept):
                out[i] = self.randbelow(int(bounds[i]))
        return out

    def bernoulli_mask(self, count: int, rate: float) -> np.ndarray:
        """Boolean mask, each entry True independently with probability ``rate``."""
        if not 0.0 <= rate <= 1.0:
            raise ValueError(f"rate must be in [0, 1], got {rate}")
        raws = self.raw(count)
        # Scaling by 2^64 only shifts the float exponent, so the threshold is
        # an exact function of the rate.
        threshold = int(rate * 2**64)
        if threshold >= 2**64:
            return np.ones(count, dtype=bool)
        return raws < np.uint64(threshold)
