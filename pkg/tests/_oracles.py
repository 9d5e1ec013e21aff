"""Independent oracles the tests check the library against.

These deliberately avoid the library's own code paths: the path oracle
enumerates every legal warping path outright, and the angle oracle uses the
arccosine formulation instead of atan2.
"""

from __future__ import annotations

import math
from functools import lru_cache

import numpy as np

Path = tuple[tuple[int, int], ...]


@lru_cache(maxsize=None)
def enumerate_warping_paths(n: int, m: int) -> tuple[Path, ...]:
    """All monotone, continuous paths from (0, 0) to (n-1, m-1)."""
    if n == 1 and m == 1:
        return (((0, 0),),)
    out: list[Path] = []
    for pn, pm in ((n - 1, m), (n, m - 1), (n - 1, m - 1)):
        if pn >= 1 and pm >= 1:
            for p in enumerate_warping_paths(pn, pm):
                out.append(p + ((n - 1, m - 1),))
    return tuple(out)


def brute_force_min_cost(costs: np.ndarray) -> float:
    """Minimal path cost by exhaustive enumeration, summed in path order."""
    n, m = costs.shape
    best: float | None = None
    for path in enumerate_warping_paths(n, m):
        s = 0.0
        for i, j in path:
            s += costs[i, j]
        if best is None or s < best:
            best = s
    assert best is not None
    return float(best)


@lru_cache(maxsize=None)
def paths_as_padded_indices(n: int, m: int) -> np.ndarray:
    """Every path as a row of flattened cell indices, padded with cell n*m.

    Padding points one past the real cells; append a zero cost there before
    gathering.
    """
    paths = enumerate_warping_paths(n, m)
    longest = max(len(p) for p in paths)
    flat = np.full((len(paths), longest), n * m, dtype=np.int64)
    for r, p in enumerate(paths):
        flat[r, : len(p)] = [i * m + j for i, j in p]
    return flat


def brute_force_min_cost_fast(costs: np.ndarray) -> float:
    """Same enumeration as brute_force_min_cost, evaluated with one gather."""
    n, m = costs.shape
    idx = paths_as_padded_indices(n, m)
    flat = np.append(costs.ravel(), 0.0)
    return float(flat[idx].sum(axis=1).min())


def acos_angle(a, pivot, c) -> float:
    """Angle at the pivot via the clamped-arccosine formulation."""
    v1 = (a[0] - pivot[0], a[1] - pivot[1])
    v2 = (c[0] - pivot[0], c[1] - pivot[1])
    n1 = math.hypot(*v1)
    n2 = math.hypot(*v2)
    cos = (v1[0] * v2[0] + v1[1] * v2[1]) / (n1 * n2)
    return math.acos(max(-1.0, min(1.0, cos)))
