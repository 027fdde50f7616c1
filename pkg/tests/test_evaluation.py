import logging

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from sklearn import metrics as skm

from oracles import naive_homogeneity_completeness, naive_silhouette, naive_single_linkage
from roleembed.evaluation import (
    LabeledDataset,
    LinearHingeClassifier,
    agglomerative_single_linkage,
    classify_kfold,
    evaluate_clustering,
    homogeneity_completeness,
    kfold_splits,
    micro_f1,
    silhouette,
)

def same_partition(a, b):
    return len(set(zip(a, b))) == len(set(a)) == len(set(b))


label_lists = st.lists(st.integers(0, 4), min_size=2, max_size=30)


def test_dataset_from_names():
    ds = LabeledDataset.from_names(["b", "a", "b", "c"])
    assert ds.labels.tolist() == [0, 1, 0, 2]
    assert ds.class_names == ("b", "a", "c")
    assert ds.class_count == 3 and len(ds) == 4
    assert ds.names() == ["b", "a", "b", "c"]


def test_single_linkage_examples():
    X = np.array([[0.0], [0.1], [5.0], [5.2], [20.0]])
    assert agglomerative_single_linkage(X, 3).tolist() == [0, 0, 1, 1, 2]
    assert agglomerative_single_linkage(X, 5).tolist() == [0, 1, 2, 3, 4]
    assert agglomerative_single_linkage(X, 1).tolist() == [0] * 5
    with pytest.raises(ValueError):
        agglomerative_single_linkage(X, 0)


def test_single_linkage_chains():
    # single linkage follows chains that complete linkage would split
    X = np.array([[0.0, 0.0], [1.0, 0.0], [2.0, 0.0], [3.0, 0.0], [0.0, 2.5]])
    assert agglomerative_single_linkage(X, 2).tolist() == [0, 0, 0, 0, 1]


def test_single_linkage_matches_naive_and_sklearn():
    from sklearn.cluster import AgglomerativeClustering

    rng = np.random.default_rng(0)
    for _ in range(40):
        n = int(rng.integers(2, 31))
        X = rng.normal(size=(n, 2))
        k = int(rng.integers(1, n + 1))
        ours = agglomerative_single_linkage(X, k)
        assert ours.tolist() == naive_single_linkage(X.tolist(), k)
        if k < n:
            sk = AgglomerativeClustering(n_clusters=k, linkage="single").fit_predict(X)
            assert same_partition(sk, ours)


def test_single_linkage_ties_follow_index_order():
    X = np.array([[0.0], [1.0], [2.0], [3.0]])
    # all gaps equal: pairs (0,1) then (1,2) merge first
    assert agglomerative_single_linkage(X, 2).tolist() == [0, 0, 0, 1]
    assert naive_single_linkage(X.tolist(), 2) == [0, 0, 0, 1]


def test_homogeneity_completeness_examples():
    assert homogeneity_completeness([0, 1, 2, 3], [0, 0, 1, 1]) == pytest.approx((1.0, 0.5))
    assert homogeneity_completeness([0, 0, 1, 1], [0, 0, 1, 1]) == (1.0, 1.0)
    assert homogeneity_completeness([5, 5, 3, 3], [0, 0, 1, 1]) == (1.0, 1.0)
    h, c = homogeneity_completeness([0, 0, 0, 0], [0, 0, 1, 1])
    assert (h, c) == (0.0, 1.0)
    # one true class: homogeneity is 1 by convention
    assert homogeneity_completeness([0, 1], [0, 0])[0] == 1.0
    ds = LabeledDataset.from_names(["x", "x", "y", "y"])
    assert homogeneity_completeness([0, 1, 2, 3], ds) == pytest.approx((1.0, 0.5))
    with pytest.raises(ValueError):
        homogeneity_completeness([0, 1], [0, 1, 2])


def test_homogeneity_completeness_against_oracles():
    rng = np.random.default_rng(1)
    for _ in range(200):
        n = int(rng.integers(1, 31))
        truth = rng.integers(0, rng.integers(1, 6), size=n)
        pred = rng.integers(0, rng.integers(1, 6), size=n)
        h, c = homogeneity_completeness(pred, truth)
        nh, nc = naive_homogeneity_completeness(pred.tolist(), truth.tolist())
        assert h == pytest.approx(nh, rel=1e-12, abs=1e-12)
        assert c == pytest.approx(nc, rel=1e-12, abs=1e-12)
        sh, sc, _ = skm.homogeneity_completeness_v_measure(truth, pred)
        assert h == pytest.approx(sh, abs=1e-10) and c == pytest.approx(sc, abs=1e-10)


def test_silhouette_examples():
    X = np.array([[0.0], [1.0], [10.0], [11.0]])
    # a = 1 everywhere; b = 10.5 for the outer points and 9.5 for the inner ones
    expected = np.mean([9.5 / 10.5, 8.5 / 9.5, 8.5 / 9.5, 9.5 / 10.5])
    assert silhouette(X, [0, 0, 1, 1]) == pytest.approx(expected, rel=1e-12)
    # a singleton scores 0
    assert silhouette(np.array([[0.0], [1.0], [5.0]]), [0, 0, 1]) == pytest.approx((0.8 + 0.75) / 3)
    with pytest.raises(ValueError):
        silhouette(X, [0, 0, 0, 0])


def test_silhouette_against_oracles():
    rng = np.random.default_rng(2)
    for _ in range(100):
        n = int(rng.integers(3, 31))
        X = rng.normal(size=(n, int(rng.integers(1, 4))))
        pred = rng.integers(0, rng.integers(2, 6), size=n)
        if len(set(pred.tolist())) < 2:
            continue
        s = silhouette(X, pred)
        assert s == pytest.approx(naive_silhouette(X.tolist(), pred.tolist()), rel=1e-12, abs=1e-12)
        if len(set(pred.tolist())) < n:
            assert s == pytest.approx(skm.silhouette_score(X, pred), abs=1e-10)


def test_evaluate_clustering_perfect():
    X = np.array([[0.0, 0.0], [0.0, 0.1], [5.0, 5.0], [5.1, 5.0]])
    rep = evaluate_clustering(X, LabeledDataset.from_names("aabb"))
    assert (rep.homogeneity, rep.completeness) == (1.0, 1.0)
    assert rep.silhouette > 0.95
    assert rep.predicted.tolist() == [0, 0, 1, 1]


@settings(max_examples=200, deadline=None)
@given(label_lists, st.data())
def test_metric_ranges_and_duality(truth, data):
    pred = data.draw(st.lists(st.integers(0, 4), min_size=len(truth), max_size=len(truth)))
    h, c = homogeneity_completeness(pred, truth)
    assert -1e-12 <= h <= 1 + 1e-12 and -1e-12 <= c <= 1 + 1e-12
    c2, h2 = homogeneity_completeness(truth, pred)
    assert h == pytest.approx(h2, abs=1e-12) and c == pytest.approx(c2, abs=1e-12)


@settings(max_examples=100, deadline=None)
@given(label_lists, st.data())
def test_metrics_invariant_to_relabelling(truth, data):
    pred = data.draw(st.lists(st.integers(0, 4), min_size=len(truth), max_size=len(truth)))
    perm = data.draw(st.permutations(range(5)))
    renamed = [perm[p] for p in pred]
    assert homogeneity_completeness(renamed, truth) == pytest.approx(homogeneity_completeness(pred, truth), abs=1e-12)
    if len(set(pred)) >= 2:
        X = np.arange(len(pred), dtype=float)[:, None] ** 1.5
        assert silhouette(X, renamed) == pytest.approx(silhouette(X, pred), abs=1e-12)


@settings(max_examples=100, deadline=None)
@given(st.integers(2, 25), st.integers(0, 2**32 - 1))
def test_silhouette_range(n, seed):
    rng = np.random.default_rng(seed)
    X = rng.normal(size=(n, 2))
    pred = np.arange(n) % 2
    assert -1 <= silhouette(X, pred) <= 1


def test_micro_f1_examples():
    assert micro_f1([0, 1, 2], [0, 1, 2]) == 1.0
    assert micro_f1([0, 0, 0, 0], [0, 1, 0, 1]) == 0.5
    truth = [0, 1, 2, 2, 1]
    pred = [0, 2, 2, 2, 1]
    assert micro_f1(pred, truth) == pytest.approx(skm.f1_score(truth, pred, average="micro"))
    with pytest.raises(ValueError):
        micro_f1([0], [0, 1])


def test_kfold_stratified():
    labels = np.repeat([0, 1, 2], [10, 20, 30])
    folds = kfold_splits(labels, 5, seed=0)
    assert sorted(np.concatenate(folds).tolist()) == list(range(60))
    for f in folds:
        assert np.bincount(labels[f], minlength=3).tolist() == [2, 4, 6]
    again = kfold_splits(labels, 5, seed=0)
    assert all(np.array_equal(a, b) for a, b in zip(folds, again))


def test_kfold_falls_back_for_small_classes(caplog):
    labels = np.array([0] * 10 + [1] * 2)
    with caplog.at_level(logging.WARNING):
        folds = kfold_splits(labels, 4, seed=1)
    assert "unstratified" in caplog.text
    assert sorted(np.concatenate(folds).tolist()) == list(range(12))
    with pytest.raises(ValueError):
        kfold_splits(labels, 1, seed=0)


def test_classifier_separable_blobs():
    rng = np.random.default_rng(3)
    centres = np.array([[0, 0], [6, 0], [0, 6], [6, 6]], dtype=float)
    y = np.repeat(np.arange(4), 25)
    X = centres[y] + rng.normal(scale=0.5, size=(100, 2))
    rep = classify_kfold(X, LabeledDataset(y, tuple("abcd")), folds=10, seed=0)
    assert rep.micro_f1 == 1.0
    assert len(rep.fold_scores) == 10


def test_classifier_chance_on_random_labels():
    rng = np.random.default_rng(4)
    X = rng.normal(size=(400, 4))
    y = rng.integers(0, 4, size=400)
    rep = classify_kfold(X, LabeledDataset(y, tuple("abcd")), folds=10, seed=0)
    assert abs(rep.micro_f1 - 0.25) <= 0.1


def test_classifier_deterministic_and_validates():
    rng = np.random.default_rng(5)
    X = rng.normal(size=(40, 3))
    X[:, 0] += np.sign(X[:, 0])  # leave a margin around the separating plane
    y = (X[:, 0] > 0).astype(int)
    ds = LabeledDataset(y, ("neg", "pos"))
    assert classify_kfold(X, ds, 5, 7) == classify_kfold(X, ds, 5, 7)
    with pytest.raises(ValueError):
        classify_kfold(X, LabeledDataset(np.zeros(40, dtype=int), ("only",)), 5, 0)
    with pytest.raises(ValueError):
        classify_kfold(X[:10], ds, 5, 0)
    clf = LinearHingeClassifier().fit(X, y)
    assert clf.decision_function(X).shape == (40, 2)
    assert micro_f1(clf.predict(X), y) == 1.0
