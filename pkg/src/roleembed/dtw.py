"""Dynamic time warping of degree sequences under a relative degree cost.

``exact_dtw`` is the quadratic dynamic program; ``fast_dtw`` is the
multi-resolution approximation (coarsen by averaging neighbouring pairs,
solve the coarse problem, refine inside the projected path widened by
``radius``).
"""
from __future__ import annotations

import math
from typing import Sequence

INF = math.inf


class DomainError(ValueError):
    """Raised for degrees the relative cost is not defined for (zero, negative or non-finite)."""


def pair_cost(a: float, b: float) -> float:
    """max(a, b) / min(a, b) - 1, the relative difference of two degrees."""
    if not (0 < a < INF and 0 < b < INF):
        raise DomainError(f"relative degree cost undefined for degrees {a} and {b}")
    if a < b:
        return b / a - 1.0
    return a / b - 1.0


def _validate(s: Sequence[float], name: str) -> list[float]:
    if len(s) == 0:
        raise ValueError(f"{name} must be a nonempty sequence")
    for v in s:
        if not 0 < v < INF:
            raise DomainError(f"{name} contains degree {v}; degrees must be positive and finite")
    return [float(v) for v in s]


def exact_dtw(s1: Sequence[float], s2: Sequence[float]) -> float:
    """Full O(|s1|*|s2|) DTW total cost with steps match/insert/delete."""
    x = _validate(s1, "s1")
    y = _validate(s2, "s2")
    m = len(y)
    prev = [INF] * (m + 1)
    prev[0] = 0.0
    for i in range(1, len(x) + 1):
        cur = [INF] * (m + 1)
        xi = x[i - 1]
        for j in range(1, m + 1):
            cur[j] = pair_cost(xi, y[j - 1]) + min(prev[j - 1], prev[j], cur[j - 1])
        prev = cur
    return prev[m]


def _windowed_dtw(
    x: list[float],
    y: list[float],
    lo: list[int] | None,
    hi: list[int] | None,
    want_path: bool = True,
) -> tuple[float, list[tuple[int, int]]]:
    """DTW restricted to rows' column ranges [lo[i], hi[i]]; returns cost and path.

    Inputs must already be validated as positive; the relative cost is
    inlined here because this loop dominates distance-matrix time.
    """
    n, m = len(x), len(y)
    if lo is None:
        lo, hi = [0] * n, [m - 1] * n
    acc: list[list[float]] = []
    prev_row: list[float] = []
    pa, pb = 0, -1
    for i in range(n):
        a, b = lo[i], hi[i]
        row = [INF] * (b - a + 1)
        xi = x[i]
        left = INF
        for j in range(a, b + 1):
            yj = y[j]
            c = xi / yj - 1.0 if xi >= yj else yj / xi - 1.0
            if i == 0 and j == 0:
                best = 0.0
            else:
                best = left
                if pa <= j <= pb:
                    v = prev_row[j - pa]
                    if v < best:
                        best = v
                if pa < j <= pb + 1:
                    v = prev_row[j - 1 - pa]
                    if v < best:
                        best = v
            left = c + best
            row[j - a] = left
        acc.append(row)
        prev_row, pa, pb = row, a, b

    def cell(i: int, j: int) -> float:
        if i < 0 or j < 0 or not lo[i] <= j <= hi[i]:
            return INF
        return acc[i][j - lo[i]]

    total = cell(n - 1, m - 1)
    if not want_path:
        return total, []
    # backtrack, preferring the diagonal on ties
    i, j = n - 1, m - 1
    path = [(i, j)]
    while (i, j) != (0, 0):
        candidates = ((cell(i - 1, j - 1), i - 1, j - 1), (cell(i - 1, j), i - 1, j), (cell(i, j - 1), i, j - 1))
        _, i, j = min(candidates, key=lambda t: t[0])
        path.append((i, j))
    path.reverse()
    return total, path


def _halve(x: list[float]) -> list[float]:
    out = [(x[i] + x[i + 1]) / 2.0 for i in range(0, len(x) - 1, 2)]
    if len(x) % 2:
        out.append(x[-1])
    return out


def _expand_window(path: list[tuple[int, int]], n: int, m: int, radius: int) -> tuple[list[int], list[int]]:
    """Project a coarse path to resolution (n, m), widened by ``radius`` coarse cells."""
    lo = [m] * n
    hi = [-1] * n
    cn = (n + 1) // 2
    cm = (m + 1) // 2
    for ci, cj in path:
        for ri in range(max(0, ci - radius), min(cn, ci + radius + 1)):
            j0 = 2 * max(0, cj - radius)
            j1 = min(m - 1, 2 * min(cm - 1, cj + radius) + 1)
            for i in (2 * ri, 2 * ri + 1):
                if i < n:
                    lo[i] = min(lo[i], j0)
                    hi[i] = max(hi[i], j1)
    return lo, hi


def _fast(x: list[float], y: list[float], radius: int, want_path: bool = True) -> tuple[float, list[tuple[int, int]]]:
    if len(x) < radius + 2 or len(y) < radius + 2:
        return _windowed_dtw(x, y, None, None, want_path)
    _, coarse_path = _fast(_halve(x), _halve(y), radius)
    lo, hi = _expand_window(coarse_path, len(x), len(y), radius)
    return _windowed_dtw(x, y, lo, hi, want_path)


def fast_dtw(s1: Sequence[float], s2: Sequence[float], radius: int = 1) -> float:
    """FastDTW cost. Reduces to the exact DP once either series is shorter than radius + 2."""
    if radius < 0:
        raise ValueError("radius must be nonnegative")
    x = _validate(s1, "s1")
    y = _validate(s2, "s2")
    return _fast(x, y, radius, want_path=False)[0]
