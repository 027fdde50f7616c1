from collections import Counter

import numpy as np
import pytest

from oracles import automorphism_orbits
from roleembed.distance import distance_matrix
from roleembed.generators import (
    PRESETS,
    ShapeSpec,
    gen_barbell,
    gen_cycle_with_shapes,
    gen_preset,
)
from roleembed.graph import GraphError, connected_components


def test_smallest_barbell():
    g, labels = gen_barbell(2, 1)
    assert g.node_count == 5
    assert g.edges() == [(0, 1), (1, 2), (2, 3), (3, 4)]
    assert labels == ["clique", "connector", "bridge0", "connector", "clique"]


def test_barbell_10_11_counts():
    g, labels = gen_barbell(10, 11)
    assert (g.node_count, g.edge_count) == (31, 102)
    assert len(set(labels)) == 8


@pytest.mark.parametrize("c", range(2, 13))
@pytest.mark.parametrize("b", range(1, 16))
def test_barbell_degree_multiset(c, b):
    g, _ = gen_barbell(c, b)
    g.check()
    expected = Counter({c - 1: 2 * (c - 1)}) + Counter({c: 2}) + Counter({2: b})
    assert Counter(g.degrees()) == expected
    assert len(connected_components(g)) == 1


@pytest.mark.parametrize("c,b", [(3, 1), (4, 3), (5, 4), (10, 11)])
def test_barbell_labels_are_automorphism_orbits(c, b):
    g, labels = gen_barbell(c, b)
    orbits = automorphism_orbits(g)
    for u in range(g.node_count):
        for v in range(g.node_count):
            assert (labels[u] == labels[v]) == (orbits[u] == orbits[v])


def test_barbell_rejects_bad_parameters():
    with pytest.raises(GraphError):
        gen_barbell(1, 3)
    with pytest.raises(GraphError):
        gen_barbell(3, 0)


def test_house_preset_counts():
    g, labels = gen_preset("house")
    # 30 cycle nodes, 10 houses of 5 nodes
    assert g.node_count == 80
    # cycle + 6 edges per house + one attachment per house
    assert g.edge_count == 30 + 10 * 6 + 10
    assert len(set(labels)) == 7
    g.check()


def test_house_labels_are_automorphism_orbits():
    g, labels = gen_preset("house")
    orbits = automorphism_orbits(g)
    for u in range(g.node_count):
        for v in range(u + 1, g.node_count):
            assert (labels[u] == labels[v]) == (orbits[u] == orbits[v])


def test_equivalent_shape_nodes_have_identical_distance_rows():
    g, labels = gen_preset("house")
    D = distance_matrix(g)
    by_label = {}
    for u, name in enumerate(labels):
        by_label.setdefault(name, []).append(u)
    for members in by_label.values():
        for v in members[1:]:
            assert np.array_equal(np.sort(D[members[0]]), np.sort(D[v]))
            assert D[members[0], v] == 0.0


def test_shapes_custom_mix():
    shapes = [ShapeSpec("house", 2), ShapeSpec("fan", 1, 5), ShapeSpec("star", 1, 3)]
    g, labels = gen_cycle_with_shapes(12, shapes)
    assert g.node_count == 12 + 2 * 5 + 6 + 4
    assert labels.count("fan-tail") == 1 and labels.count("fan-blade") == 4
    assert labels.count("cycle@house") == 2
    coarse = gen_cycle_with_shapes(12, shapes, roles="coarse")[1]
    assert set(coarse) == {"cycle", "house-top", "house-bottom", "house-roof", "fan-center", "fan-leaf",
                           "star-center", "star-leaf"}


def test_perturbation_adds_exact_edge_count_deterministically():
    base, _ = gen_preset("house")
    a, _ = gen_preset("house", perturb_edges=10, seed=3)
    b, _ = gen_preset("house", perturb_edges=10, seed=3)
    c, _ = gen_preset("house", perturb_edges=10, seed=4)
    assert a.edge_count == base.edge_count + 10
    assert set(base.edges()) <= set(a.edges())
    assert a == b
    assert a != c


def test_all_presets_are_connected():
    for name in PRESETS:
        g, labels = gen_preset(name)
        assert len(labels) == g.node_count
        assert len(connected_components(g)) == 1
        assert min(g.degrees()) >= 1


def test_shape_errors():
    with pytest.raises(GraphError):
        ShapeSpec("triangle", 1)
    with pytest.raises(GraphError):
        gen_cycle_with_shapes(3, [ShapeSpec("house", 4)])
    with pytest.raises(GraphError):
        gen_cycle_with_shapes(2, [])
    with pytest.raises(GraphError):
        gen_preset("nope")
