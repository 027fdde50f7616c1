"""Repeated-run protocols: clustering of synthetic shape graphs and k-fold classification."""
from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .distance import DistanceConfig, distance_matrix
from .evaluation import LabeledDataset, classify_kfold, evaluate_clustering, homogeneity_completeness, silhouette
from .generators import gen_preset
from .stress import SolverConfig, embed

# Restarts guard against majorization local minima in which an equivalence
# class stays split; the tolerance is the usual 1e-3.
CLUSTER_SOLVER = SolverConfig(d=2, epsilon=1e-3, n_init=4)
CLASSIFY_SOLVER = SolverConfig(d=8, epsilon=1e-3, n_init=1)


@dataclass(frozen=True)
class RunScores:
    homogeneity: float
    completeness: float
    silhouette: float


@dataclass(frozen=True)
class ClusterProtocolResult:
    runs: tuple[RunScores, ...]
    baselines: tuple[RunScores, ...]

    @staticmethod
    def _mean(rows: tuple[RunScores, ...]) -> RunScores:
        a = np.array([(r.homogeneity, r.completeness, r.silhouette) for r in rows])
        return RunScores(*(float(x) for x in a.mean(axis=0)))

    @property
    def mean(self) -> RunScores:
        return self._mean(self.runs)

    @property
    def baseline(self) -> RunScores:
        return self._mean(self.baselines)


def random_baseline(X: np.ndarray, pred: np.ndarray, truth: LabeledDataset, seed: int) -> RunScores:
    """Scores of the same cluster sizes assigned to nodes at random."""
    shuffled = np.random.default_rng(seed).permutation(pred)
    h, c = homogeneity_completeness(shuffled, truth)
    return RunScores(h, c, silhouette(X, shuffled))


def cluster_protocol(
    preset: str = "house",
    runs: int = 25,
    perturb_edges: int = 0,
    seed: int = 0,
    solver: SolverConfig = CLUSTER_SOLVER,
    distance: DistanceConfig = DistanceConfig(),
) -> ClusterProtocolResult:
    """Generate, embed and cluster ``runs`` times; run r uses seed ``seed + r``
    for both the perturbation edges and the solver start."""
    scores, baselines = [], []
    cache: dict[tuple, np.ndarray] = {}
    for r in range(runs):
        s = seed + r
        g, names = gen_preset(preset, perturb_edges, s)
        key = tuple(g.edges())
        if key not in cache:
            cache[key] = distance_matrix(g, distance)
        truth = LabeledDataset.from_names(names)
        X, _ = embed(cache[key], replace(solver, seed=s))
        rep = evaluate_clustering(X, truth)
        scores.append(RunScores(rep.homogeneity, rep.completeness, rep.silhouette))
        baselines.append(random_baseline(X, rep.predicted, truth, s))
    return ClusterProtocolResult(tuple(scores), tuple(baselines))


def classify_protocol(
    preset: str = "stars",
    folds: int = 10,
    seed: int = 0,
    solver: SolverConfig = CLASSIFY_SOLVER,
    distance: DistanceConfig = DistanceConfig(),
):
    g, names = gen_preset(preset, 0, seed)
    X, _ = embed(distance_matrix(g, distance), replace(solver, seed=seed))
    return classify_kfold(X, LabeledDataset.from_names(names), folds, seed)
