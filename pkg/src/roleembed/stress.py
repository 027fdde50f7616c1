"""Stress majorization (SMACOF with unit weights) for embedding a dissimilarity matrix.

Each iteration minimises the quadratic majorizer

    f_Y(X) = sum_{i<j} D_ij^2 + tr(X^T L X) - 2 tr(X^T L^Y Y)

which touches the stress at X = Y, so stress never increases. With unit
weights ``L = n I - 1 1^T`` and the minimiser has the closed form
``X = L^Y Y / n`` (the Guttman transform).
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

ZERO_STRESS = 1e-30


@dataclass(frozen=True)
class SolverConfig:
    d: int = 2
    epsilon: float = 1e-3
    max_iters: int = 1000
    seed: int = 0
    init_scale: float = 1.0
    n_init: int = 1

    def __post_init__(self):
        if self.d < 1:
            raise ValueError("embedding dimension d must be >= 1")
        if not self.epsilon > 0:
            raise ValueError("epsilon must be positive")
        if self.max_iters < 1:
            raise ValueError("max_iters must be >= 1")
        if not self.init_scale > 0:
            raise ValueError("init_scale must be positive")
        if self.n_init < 1:
            raise ValueError("n_init must be >= 1")


@dataclass
class SolverTrace:
    stresses: list[float] = field(default_factory=list)
    iterations: int = 0
    converged: bool = False


def _check(X: np.ndarray, D: np.ndarray) -> None:
    if X.ndim != 2 or D.ndim != 2 or D.shape[0] != D.shape[1]:
        raise ValueError("expected an n x d embedding and an n x n distance matrix")
    if X.shape[0] != D.shape[0]:
        raise ValueError(f"embedding has {X.shape[0]} rows but D is {D.shape[0]} x {D.shape[1]}")


def pairwise_distances(X: np.ndarray) -> np.ndarray:
    diff = X[:, None, :] - X[None, :, :]
    return np.sqrt(np.einsum("ijk,ijk->ij", diff, diff))


def stress(X: np.ndarray, D: np.ndarray) -> float:
    """sum over i<j of (||X_i - X_j|| - D_ij)^2."""
    X = np.asarray(X, dtype=float)
    D = np.asarray(D, dtype=float)
    _check(X, D)
    iu = np.triu_indices(X.shape[0], 1)
    r = pairwise_distances(X)[iu] - D[iu]
    return float(r @ r)


def complete_laplacian(n: int) -> np.ndarray:
    return n * np.eye(n) - np.ones((n, n))


def weighted_laplacian(Y: np.ndarray, D: np.ndarray) -> np.ndarray:
    """L^Y: off-diagonal -D_ij / ||Y_i - Y_j|| (0 where the rows coincide), zero row sums."""
    Y = np.asarray(Y, dtype=float)
    D = np.asarray(D, dtype=float)
    _check(Y, D)
    dist = pairwise_distances(Y)
    off = np.zeros_like(dist)
    mask = dist > 0
    off[mask] = -D[mask] / dist[mask]
    np.fill_diagonal(off, 0.0)
    np.fill_diagonal(off, -off.sum(axis=1))
    return off


def surrogate(X: np.ndarray, Y: np.ndarray, D: np.ndarray) -> float:
    """The majorizer f_Y(X); >= stress(X, D) with equality at X = Y."""
    X = np.asarray(X, dtype=float)
    Y = np.asarray(Y, dtype=float)
    D = np.asarray(D, dtype=float)
    _check(X, D)
    _check(Y, D)
    if X.shape != Y.shape:
        raise ValueError("X and Y must have the same shape")
    n = X.shape[0]
    iu = np.triu_indices(n, 1)
    const = float(D[iu] @ D[iu])
    col = X.sum(axis=0)
    quad = n * float(np.sum(X * X)) - float(col @ col)  # tr(X^T L X)
    cross = float(np.sum(X * (weighted_laplacian(Y, D) @ Y)))
    return const + quad - 2.0 * cross


def majorize_step(X: np.ndarray, D: np.ndarray) -> np.ndarray:
    """One Guttman transform, re-centred to zero column means."""
    X = np.asarray(X, dtype=float)
    n = X.shape[0]
    Z = weighted_laplacian(X, D) @ X / n
    return Z - Z.mean(axis=0)


def initial_layout(n: int, cfg: SolverConfig, start: int = 0) -> np.ndarray:
    rng = np.random.default_rng(cfg.seed if start == 0 else [cfg.seed, start])
    X = rng.uniform(-cfg.init_scale, cfg.init_scale, size=(n, cfg.d))
    # exact coincidences are essentially impossible but would freeze the pair
    while True:
        _, first = np.unique(X, axis=0, return_index=True)
        dup = np.setdiff1d(np.arange(n), first)
        if dup.size == 0:
            return X
        X[dup] += rng.uniform(-1e-8, 1e-8, size=(dup.size, cfg.d)) * cfg.init_scale


def _run(D: np.ndarray, X: np.ndarray, cfg: SolverConfig) -> tuple[np.ndarray, SolverTrace]:
    prev = stress(X, D)
    trace = SolverTrace(stresses=[prev])
    for _ in range(cfg.max_iters):
        if prev < ZERO_STRESS:
            trace.converged = True
            break
        X = majorize_step(X, D)
        cur = stress(X, D)
        trace.stresses.append(cur)
        trace.iterations += 1
        if abs(cur - prev) / prev < cfg.epsilon:
            trace.converged = True
            break
        prev = cur
    else:
        trace.converged = trace.stresses[-1] < ZERO_STRESS
    return X, trace


def embed(D: np.ndarray, cfg: SolverConfig = SolverConfig()) -> tuple[np.ndarray, SolverTrace]:
    """Iterate majorization steps until the relative stress change drops below epsilon.

    With ``cfg.n_init > 1`` the solver is restarted from that many seeded
    layouts and the run with the lowest final stress is returned (earliest
    start wins ties). Start 0 always uses ``cfg.seed`` directly.
    """
    D = np.asarray(D, dtype=float)
    if D.ndim != 2 or D.shape[0] != D.shape[1] or D.shape[0] < 2:
        raise ValueError("D must be a square matrix with n >= 2")
    if not np.all(np.isfinite(D)) or np.any(D < 0):
        raise ValueError("D must be finite and nonnegative")
    best = None
    for start in range(cfg.n_init):
        X, trace = _run(D, initial_layout(D.shape[0], cfg, start), cfg)
        if best is None or trace.stresses[-1] < best[1].stresses[-1]:
            best = (X, trace)
    return best
