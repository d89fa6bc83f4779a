"""Derivative-free 1-D searches used for peaks and crossovers."""
from __future__ import annotations

import math
from typing import Callable

import numpy as np

INV_PHI = (math.sqrt(5) - 1) / 2


def golden_section_max(f: Callable[[float], float], lo: float, hi: float,
                       tol: float = 1e-8, max_iter: int = 500) -> float:
    """Maximizer of a unimodal ``f`` on ``[lo, hi]`` to absolute ``tol``."""
    a, b = lo, hi
    x1 = b - INV_PHI * (b - a)
    x2 = a + INV_PHI * (b - a)
    f1, f2 = f(x1), f(x2)
    for _ in range(max_iter):
        if b - a <= tol:
            break
        if f1 < f2:
            a, x1, f1 = x1, x2, f2
            x2 = a + INV_PHI * (b - a)
            f2 = f(x2)
        else:
            b, x2, f2 = x2, x1, f1
            x1 = b - INV_PHI * (b - a)
            f1 = f(x1)
    return float(0.5 * (a + b))


def grid_bracketed_max(f: Callable[[float], float], lo: float, hi: float,
                       grid_step: float = 0.25, tol: float = 1e-8,
                       max_hi: float = 1e4) -> float:
    """Coarse-grid bracket then golden-section refine.

    If the grid maximum sits on the upper edge the window is doubled,
    up to ``max_hi``.
    """
    while True:
        grid = np.arange(lo, hi + grid_step / 2, grid_step)
        vals = np.array([f(t) for t in grid])
        i = int(np.argmax(vals))
        if i < len(grid) - 1 or hi >= max_hi:
            break
        hi = min(2 * hi, max_hi)
    left = float(grid[max(i - 1, 0)])
    right = float(grid[min(i + 1, len(grid) - 1)])
    return golden_section_max(f, left, right, tol=tol)


def first_nonpositive(f: Callable[[float], float], lo: float, hi: float,
                      grid_step: float = 0.25, tol: float = 1e-9) -> float | None:
    """Smallest ``t`` in ``[lo, hi]`` with ``f(t) <= 0``, by scan then bisection.

    Returns the right end of the final bracket, so ``f`` is <= 0 there.
    ``None`` when no sign change is seen on the scan grid.
    """
    if f(lo) <= 0:
        return lo
    prev = lo
    t = lo
    while t < hi:
        t = min(t + grid_step, hi)
        if f(t) <= 0:
            a, b = prev, t
            while b - a > tol:
                mid = 0.5 * (a + b)
                if f(mid) <= 0:
                    b = mid
                else:
                    a = mid
            return b
        prev = t
    return None
