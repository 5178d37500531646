"""Shared test utilities: random DSS generation and the paper's worked example."""

from __future__ import annotations

import numpy as np

from dsskit import Dss

# The worked binary DSS(25,12,3) used throughout: index 3, redundancy 12,
# meets the redundancy lower bound with equality.
PAPER_SETS = [[1, 2, 3, 4, 6, 15], [5, 9, 10, 14, 17, 24]]
PAPER_N = 25
PAPER_TEMPLATE = "*000010**11***10*1******1"


def paper_dss() -> Dss:
    return Dss.from_sets(PAPER_N, PAPER_SETS)


def random_dss(rng: np.random.Generator, n_max: int = 64, q_max: int = 6) -> Dss:
    """A uniform-ish random valid DSS with n in [2, n_max]."""
    n = int(rng.integers(2, n_max + 1))
    q = int(rng.integers(2, min(q_max, n) + 1))
    r = int(rng.integers(0, n + 1))
    elements = rng.permutation(n)[:r]
    # Random composition of r into q nonnegative parts.
    cuts = np.sort(rng.integers(0, r + 1, size=q - 1)) if r else np.zeros(q - 1, int)
    sizes = np.diff(np.concatenate([[0], cuts, [r]]))
    sets = []
    start = 0
    for size in sizes:
        sets.append(sorted(int(x) for x in elements[start : start + int(size)]))
        start += int(size)
    return Dss.from_sets(n, sets)
