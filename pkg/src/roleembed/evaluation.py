"""Clustering and classification scores for node embeddings."""
from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .stress import pairwise_distances

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class LabeledDataset:
    """Per-node dense class ids ``0..class_count-1`` plus the original label names."""

    labels: np.ndarray
    class_names: tuple[str, ...]

    @classmethod
    def from_names(cls, names: Sequence[str]) -> "LabeledDataset":
        """Dense ids assigned in order of first appearance."""
        index: dict[str, int] = {}
        ids = [index.setdefault(str(x), len(index)) for x in names]
        return cls(np.asarray(ids, dtype=int), tuple(index))

    @property
    def class_count(self) -> int:
        return len(self.class_names)

    def __len__(self) -> int:
        return len(self.labels)

    def names(self) -> list[str]:
        return [self.class_names[i] for i in self.labels]


@dataclass(frozen=True)
class ClusteringReport:
    homogeneity: float
    completeness: float
    silhouette: float
    predicted: np.ndarray


def _canonical(ids: Sequence[int]) -> np.ndarray:
    remap: dict[int, int] = {}
    return np.asarray([remap.setdefault(int(c), len(remap)) for c in ids], dtype=int)


def agglomerative_single_linkage(X: np.ndarray, cluster_count: int) -> np.ndarray:
    """Merge clusters by minimum point-to-point distance until ``cluster_count`` remain.

    Candidate merges are ordered by (distance, i, j) over point pairs, which
    is Kruskal's algorithm on the complete graph. Cluster ids are numbered by
    first appearance in node order.
    """
    X = np.asarray(X, dtype=float)
    n = X.shape[0]
    if not 1 <= cluster_count <= n:
        raise ValueError(f"cluster_count must be in [1, {n}], got {cluster_count}")
    parent = list(range(n))

    def find(a: int) -> int:
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    iu, ju = np.triu_indices(n, 1)
    dist = pairwise_distances(X)[iu, ju]
    order = np.lexsort((ju, iu, dist))
    clusters = n
    for e in order:
        if clusters == cluster_count:
            break
        a, b = find(int(iu[e])), find(int(ju[e]))
        if a != b:
            parent[max(a, b)] = min(a, b)
            clusters -= 1
    return _canonical([find(i) for i in range(n)])


def _entropy(counts: np.ndarray) -> float:
    p = counts[counts > 0] / counts.sum()
    return float(-(p * np.log(p)).sum())


def _conditional_entropy(contingency: np.ndarray) -> float:
    """H(rows | columns) from a rows x columns contingency table."""
    total = contingency.sum()
    h = 0.0
    for col in contingency.T:
        nk = col.sum()
        for nck in col[col > 0]:
            h -= nck / total * np.log(nck / nk)
    return float(h)


def homogeneity_completeness(pred: Sequence[int], truth: Sequence[int] | LabeledDataset) -> tuple[float, float]:
    """Entropy-based homogeneity 1 - H(C|K)/H(C) and completeness 1 - H(K|C)/H(K)."""
    t = truth.labels if isinstance(truth, LabeledDataset) else np.asarray(truth)
    p = np.asarray(pred)
    if len(t) != len(p):
        raise ValueError("pred and truth must cover the same nodes")
    _, ti = np.unique(t, return_inverse=True)
    _, pi = np.unique(p, return_inverse=True)
    table = np.zeros((ti.max() + 1, pi.max() + 1))
    np.add.at(table, (ti, pi), 1)
    h_c, h_k = _entropy(table.sum(axis=1)), _entropy(table.sum(axis=0))
    homogeneity = 1.0 if h_c == 0 else 1.0 - _conditional_entropy(table) / h_c
    completeness = 1.0 if h_k == 0 else 1.0 - _conditional_entropy(table.T) / h_k
    return homogeneity, completeness


def silhouette(X: np.ndarray, pred: Sequence[int]) -> float:
    """Mean silhouette coefficient; members of singleton clusters score 0."""
    X = np.asarray(X, dtype=float)
    p = np.asarray(pred)
    clusters = np.unique(p)
    if len(clusters) < 2:
        raise ValueError("silhouette needs at least 2 clusters")
    dist = pairwise_distances(X)
    masks = [p == c for c in clusters]
    scores = np.zeros(len(p))
    for i in range(len(p)):
        own = None
        b = np.inf
        for c, m in zip(clusters, masks):
            if c == p[i]:
                own = m
            else:
                b = min(b, dist[i, m].mean())
        size = own.sum()
        if size == 1:
            continue
        a = dist[i, own].sum() / (size - 1)
        denom = max(a, b)
        scores[i] = 0.0 if denom == 0 else (b - a) / denom
    return float(scores.mean())


def evaluate_clustering(X: np.ndarray, truth: LabeledDataset, cluster_count: int | None = None) -> ClusteringReport:
    k = truth.class_count if cluster_count is None else cluster_count
    pred = agglomerative_single_linkage(X, k)
    h, c = homogeneity_completeness(pred, truth)
    s = silhouette(X, pred) if len(np.unique(pred)) >= 2 else 0.0
    return ClusteringReport(h, c, s, pred)


def micro_f1(pred: Sequence[int], truth: Sequence[int]) -> float:
    """For single-label multi-class prediction micro-F1 is plain accuracy."""
    p, t = np.asarray(pred), np.asarray(truth)
    if p.shape != t.shape:
        raise ValueError(f"length mismatch: {len(p)} predictions vs {len(t)} labels")
    if len(t) == 0:
        raise ValueError("no predictions")
    return float(np.mean(p == t))


def kfold_splits(labels: np.ndarray, folds: int, seed: int) -> list[np.ndarray]:
    """Seeded stratified fold assignment; falls back to plain shuffling for small classes."""
    labels = np.asarray(labels)
    rng = np.random.default_rng(seed)
    n = len(labels)
    if folds < 2 or folds > n:
        raise ValueError(f"folds must be in [2, {n}]")
    classes, counts = np.unique(labels, return_counts=True)
    fold_of = np.empty(n, dtype=int)
    if counts.min() < folds:
        log.warning("smallest class has %d members < %d folds; using unstratified folds", counts.min(), folds)
        perm = rng.permutation(n)
        fold_of[perm] = np.arange(n) % folds
    else:
        offset = 0
        for c in classes:
            members = rng.permutation(np.flatnonzero(labels == c))
            fold_of[members] = (offset + np.arange(len(members))) % folds
            offset += len(members)
    return [np.flatnonzero(fold_of == f) for f in range(folds)]


class LinearHingeClassifier:
    """One-vs-rest L2-regularised linear classifier trained with full-batch subgradient descent.

    Step size at iteration t is ``lr / sqrt(t)``. The returned weights are
    the running average of all iterates; the last iterate of a subgradient
    method keeps oscillating around the optimum. Features are standardised
    with statistics of the training data.
    """

    def __init__(self, reg: float = 1e-2, iters: int = 2000, lr: float = 0.1):
        self.reg = reg
        self.iters = iters
        self.lr = lr

    def fit(self, X: np.ndarray, y: np.ndarray, class_count: int | None = None) -> "LinearHingeClassifier":
        X = np.asarray(X, dtype=float)
        y = np.asarray(y, dtype=int)
        self.class_count = int(y.max()) + 1 if class_count is None else class_count
        self.mean_ = X.mean(axis=0)
        std = X.std(axis=0)
        self.scale_ = np.where(std > 0, std, 1.0)
        Z = (X - self.mean_) / self.scale_
        n, d = Z.shape
        Y = -np.ones((n, self.class_count))
        Y[np.arange(n), y] = 1.0
        W = np.zeros((d, self.class_count))
        b = np.zeros(self.class_count)
        W_avg, b_avg = np.zeros_like(W), np.zeros_like(b)
        for t in range(1, self.iters + 1):
            G = Y * ((Y * (Z @ W + b)) < 1.0)
            step = self.lr / np.sqrt(t)
            W -= step * (self.reg * W - Z.T @ G / n)
            b -= step * (-G.sum(axis=0) / n)
            W_avg += (W - W_avg) / t
            b_avg += (b - b_avg) / t
        self.coef_, self.intercept_ = W_avg, b_avg
        return self

    def decision_function(self, X: np.ndarray) -> np.ndarray:
        return ((np.asarray(X, dtype=float) - self.mean_) / self.scale_) @ self.coef_ + self.intercept_

    def predict(self, X: np.ndarray) -> np.ndarray:
        return np.argmax(self.decision_function(X), axis=1)


@dataclass(frozen=True)
class ClassificationReport:
    micro_f1: float
    fold_scores: tuple[float, ...]


def classify_kfold(X: np.ndarray, truth: LabeledDataset, folds: int = 10, seed: int = 0) -> ClassificationReport:
    """Cross-validated micro-F1 over the concatenated held-out predictions."""
    X = np.asarray(X, dtype=float)
    if truth.class_count < 2 or len(np.unique(truth.labels)) < 2:
        raise ValueError("classification needs at least 2 distinct classes")
    if len(truth) != X.shape[0]:
        raise ValueError(f"{X.shape[0]} embedding rows but {len(truth)} labels")
    pred = np.empty(len(truth), dtype=int)
    scores = []
    for test in kfold_splits(truth.labels, folds, seed):
        train = np.setdiff1d(np.arange(len(truth)), test)
        clf = LinearHingeClassifier().fit(X[train], truth.labels[train], truth.class_count)
        pred[test] = clf.predict(X[test])
        scores.append(micro_f1(pred[test], truth.labels[test]))
    return ClassificationReport(micro_f1(pred, truth.labels), tuple(scores))
