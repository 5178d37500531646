"""Knuth shuffle with replayable transposition traces.

A length-n shuffle is a sequence of n-1 staged transpositions: at step i the
positions (n-1-i) and t_i are swapped, where t_i is uniform on [0, n-1-i].
Recording the choices t_0..t_{n-2} makes the permutation replayable and lets
a single choice be perturbed, which changes the output in at most three
positions (the Lipschitz property the tail bounds rely on).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import LengthMismatch
from .rng import RandomStream, Seed


@dataclass(eq=False)
class ShuffleTrace:
    """The n-1 transposition choices of one shuffle; choices[i] in [0, n-1-i]."""

    n: int
    choices: np.ndarray

    def __post_init__(self):
        self.choices = np.asarray(self.choices, dtype=np.int64)
        if self.choices.shape != (max(self.n - 1, 0),):
            raise LengthMismatch(
                f"trace for n={self.n} needs {self.n - 1} choices, "
                f"got {self.choices.size}"
            )
        if self.n > 1:
            ceilings = np.arange(self.n - 1, 0, -1, dtype=np.int64)
            if (self.choices < 0).any() or (self.choices > ceilings).any():
                raise ValueError("trace choice outside [0, n-1-i]")

    def __eq__(self, other):
        if not isinstance(other, ShuffleTrace):
            return NotImplemented
        return self.n == other.n and np.array_equal(self.choices, other.choices)

    def with_choice(self, j: int, alt: int) -> "ShuffleTrace":
        """Copy of this trace with choices[j] replaced by ``alt``."""
        if not 0 <= j < self.n - 1:
            raise IndexError(f"choice index {j} outside [0, {self.n - 2}]")
        if not 0 <= alt <= self.n - 1 - j:
            raise IndexError(f"alternative {alt} outside [0, {self.n - 1 - j}]")
        choices = self.choices.copy()
        choices[j] = alt
        return ShuffleTrace(self.n, choices)

    def to_json_list(self) -> list[int]:
        return [int(c) for c in self.choices]


def sample_trace(n: int, seed: Seed) -> ShuffleTrace:
    """Draw a uniform trace for length ``n``; deterministic given the seed.

    choices[i] is uniform on [0, n-1-i] via rejection sampling, so every one
    of the n! output permutations has probability exactly 1/n!.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    stream = RandomStream(seed)
    return _trace_from_stream(n, stream)


def sample_trace_batch(n: int, count: int, seed: Seed) -> np.ndarray:
    """``count`` traces drawn sequentially from one stream, as a (count, n-1) array.

    Intended for bulk Monte-Carlo use (uniformity tests); row ``i`` is the
    trace of sample ``i``.  Bounded draws are made for the whole batch in
    row-major order with rejected entries retried in flat order, so the
    result is a pure function of (n, count, seed).
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    stream = RandomStream(seed)
    if n == 1:
        return np.zeros((count, 0), dtype=np.int64)
    bounds = np.tile(np.arange(n, 1, -1, dtype=np.uint64), count)
    return stream.randbelow_many(bounds).reshape(count, n - 1)


def apply_trace(v, trace: ShuffleTrace):
    """Apply the recorded transpositions to ``v`` in O(n).

    Step i swaps positions (n-1-i) and choices[i].  The result has the type
    of the input (list, tuple, or ndarray).
    """
    n = trace.n
    if len(v) != n:
        raise LengthMismatch(f"sequence length {len(v)} != trace length {n}")
    out = list(v)
    choices = trace.choices.tolist()
    for i in range(n - 1):
        a = n - 1 - i
        b = choices[i]
        out[a], out[b] = out[b], out[a]
    if isinstance(v, np.ndarray):
        return np.asarray(out, dtype=v.dtype)
    if isinstance(v, tuple):
        return tuple(out)
    return out


def permute_identity_batch(choices: np.ndarray) -> np.ndarray:
    """Apply each row of ``choices`` to (0..n-1); returns (count, n) permutations.

    Vectorized companion of :func:`apply_trace` for batches from
    :func:`sample_trace_batch`.
    """
    count, steps = choices.shape
    n = steps + 1
    arr = np.broadcast_to(np.arange(n, dtype=np.int64), (count, n)).copy()
    rows = np.arange(count)
    for i in range(steps):
        a = n - 1 - i
        b = choices[:, i]
        tmp = arr[rows, a].copy()
        arr[rows, a] = arr[rows, b]
        arr[rows, b] = tmp
    return arr


def trace_distance_bound_check(v, trace: ShuffleTrace, j: int, alt: int) -> int:
    """Hamming distance after perturbing choice ``j`` to ``alt``; always <= 3.

    Raises IndexError if ``j`` or ``alt`` is out of range or ``alt`` equals
    the original choice.
    """
    if not 0 <= j < trace.n - 1:
        raise IndexError(f"choice index {j} outside [0, {trace.n - 2}]")
    if alt == int(trace.choices[j]):
        raise IndexError("alternative equals the original choice")
    base = apply_trace(v, trace)
    perturbed = apply_trace(v, trace.with_choice(j, alt))
    return sum(1 for x, y in zip(base, perturbed) if x != y)


def _trace_from_stream(n: int, stream: RandomStream) -> ShuffleTrace:
    if n == 1:
        return ShuffleTrace(1, np.zeros(0, dtype=np.int64))
    bounds = np.arange(n, 1, -1, dtype=np.uint64)
    return ShuffleTrace(n, stream.randbelow_many(bounds))
