"""Pairwise structural-role distances from per-hop ordered degree sequences."""
from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .dtw import DomainError, fast_dtw, pair_cost
from .graph import Graph, diameter, khop_rings, ordered_degree_sequence

Signature = tuple[tuple[int, ...], ...]


class IsolatedNodeError(DomainError):
    def __init__(self, nodes: Sequence[str]):
        shown = ", ".join(nodes[:10]) + (" ..." if len(nodes) > 10 else "")
        super().__init__(
            f"{len(nodes)} isolated node(s) ({shown}): the relative degree cost max/min - 1 "
            "is undefined at degree 0; drop these nodes or attach them before embedding"
        )
        self.nodes = list(nodes)


@dataclass(frozen=True)
class DistanceConfig:
    """Hop depth ``k`` (None: graph diameter), per-hop weights (None: all 1) and FastDTW radius."""

    k: int | None = None
    weights: tuple[float, ...] | None = None
    radius: int = 1

    def resolve(self, g: Graph) -> tuple[int, tuple[float, ...]]:
        k = diameter(g) if self.k is None else self.k
        if k < 0:
            raise ValueError("hop depth k must be nonnegative")
        if self.radius < 0:
            raise ValueError("radius must be nonnegative")
        if self.weights is None:
            weights = (1.0,) * (k + 1)
        else:
            weights = tuple(float(w) for w in self.weights)
            if len(weights) != k + 1:
                raise ValueError(f"expected {k + 1} hop weights for k={k}, got {len(weights)}")
            if any(w < 0 for w in weights) or not any(w > 0 for w in weights):
                raise ValueError("hop weights must be nonnegative with at least one positive")
        return k, weights

    def describe(self) -> str:
        w = "default" if self.weights is None else ",".join(repr(x) for x in self.weights)
        return f"k={self.k};weights={w};radius={self.radius}"


def empty_penalty(g: Graph) -> float:
    """Cost of a hop where exactly one of the two rings is empty."""
    return pair_cost(1, max(g.degrees())) + 1.0


def _check_isolated(g: Graph) -> None:
    isolated = [g.node_ids[u] for u in range(g.node_count) if g.degree(u) == 0]
    if isolated:
        raise IsolatedNodeError(isolated)


def node_signature(g: Graph, u: int, k: int) -> Signature:
    return tuple(tuple(ordered_degree_sequence(g, ring)) for ring in khop_rings(g, u, k).rings)


class _SignatureDistance:
    """Weighted per-hop FastDTW sum between signatures, memoised on sequence pairs."""

    def __init__(self, weights: tuple[float, ...], radius: int, penalty: float):
        self.weights = weights
        self.radius = radius
        self.penalty = penalty
        self._memo: dict[tuple[tuple[int, ...], tuple[int, ...]], float] = {}

    def hop_cost(self, a: tuple[int, ...], b: tuple[int, ...]) -> float:
        if a == b:
            return 0.0
        if not a or not b:
            return self.penalty
        if b < a:
            a, b = b, a
        key = (a, b)
        c = self._memo.get(key)
        if c is None:
            c = fast_dtw(a, b, self.radius)
            self._memo[key] = c
        return c

    def __call__(self, su: Signature, sv: Signature) -> float:
        total = 0.0
        for w, a, b in zip(self.weights, su, sv):
            if w:
                total += w * self.hop_cost(a, b)
        return total


def structural_distance(g: Graph, u: int, v: int, cfg: DistanceConfig = DistanceConfig()) -> float:
    """Sum over hops 0..k of w_i * FastDTW(L_i(u), L_i(v))."""
    for x in (u, v):
        if g.degree(x) == 0:
            raise IsolatedNodeError([g.node_ids[x]])
    k, weights = cfg.resolve(g)
    dist = _SignatureDistance(weights, cfg.radius, empty_penalty(g))
    return dist(node_signature(g, u, k), node_signature(g, v, k))


def _rows(args) -> list[tuple[int, list[float]]]:
    sigs, rows, weights, radius, penalty = args
    dist = _SignatureDistance(weights, radius, penalty)
    return [(i, [dist(sigs[i], sigs[j]) for j in range(i + 1, len(sigs))]) for i in rows]


def resolve_workers(workers: int | None = None) -> int:
    """Worker count; ``None`` reads ROLE_EMBED_THREADS (0 or unset means one per CPU)."""
    if workers is None:
        workers = int(os.environ.get("ROLE_EMBED_THREADS", "0") or 0)
    if workers <= 0:
        workers = os.cpu_count() or 1
    return workers


def distance_matrix(g: Graph, cfg: DistanceConfig = DistanceConfig(), workers: int | None = 1) -> np.ndarray:
    """Full symmetric n x n structural distance matrix.

    Entries are computed independently of each other, so the result does not
    depend on ``workers``.
    """
    if g.node_count < 2:
        raise ValueError("distance matrix needs at least 2 nodes")
    _check_isolated(g)
    k, weights = cfg.resolve(g)
    penalty = empty_penalty(g)
    sigs = [node_signature(g, u, k) for u in range(g.node_count)]
    n = g.node_count
    workers = resolve_workers(workers)

    if workers == 1 or n < 64:
        chunks = [_rows((sigs, range(n), weights, cfg.radius, penalty))]
    else:
        # interleave rows so the triangular workload is balanced
        jobs = [(sigs, range(w, n, workers), weights, cfg.radius, penalty) for w in range(workers)]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            chunks = list(pool.map(_rows, jobs))

    D = np.zeros((n, n))
    for chunk in chunks:
        for i, vals in chunk:
            D[i, i + 1:] = vals
            D[i + 1:, i] = vals
    return D
