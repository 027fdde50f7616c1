"""Synthetic graphs with known structural roles: barbells and cycles decorated with shapes."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .graph import Graph, GraphError

SHAPE_KINDS = ("house", "fan", "star")


@dataclass(frozen=True)
class ShapeSpec:
    kind: str
    count: int
    size: int = 6  # branches for fan/star; ignored for house

    def __post_init__(self):
        if self.kind not in SHAPE_KINDS:
            raise GraphError(f"unknown shape {self.kind!r}; expected one of {SHAPE_KINDS}")
        if self.count < 0:
            raise GraphError("shape count must be nonnegative")
        if self.kind != "house" and self.size < 1:
            raise GraphError(f"{self.kind} needs at least one branch")


def gen_barbell(clique_size: int, bridge_length: int) -> tuple[Graph, list[str]]:
    """Two K_clique_size joined through a path of ``bridge_length`` extra nodes.

    Layout: first clique ``0..c-1`` (connector ``c-1``), bridge ``c..c+b-1``,
    second clique ``c+b..2c+b-1`` (connector ``c+b``). The returned labels
    are the automorphism classes: clique interior, connector, and bridge
    nodes grouped by distance to the nearer end.
    """
    if clique_size < 2:
        raise GraphError("clique_size must be at least 2")
    if bridge_length < 1:
        raise GraphError("bridge_length must be at least 1")
    c, b = clique_size, bridge_length
    n = 2 * c + b
    edges = []
    for offset in (0, c + b):
        edges += [(offset + i, offset + j) for i in range(c) for j in range(i + 1, c)]
    chain = [c - 1] + list(range(c, c + b)) + [c + b]
    edges += list(zip(chain, chain[1:]))

    labels = []
    for v in range(n):
        if v in (c - 1, c + b):
            labels.append("connector")
        elif v < c or v > c + b:
            labels.append("clique")
        else:
            p = v - c
            labels.append(f"bridge{min(p, b - 1 - p)}")
    return Graph.from_edges(n, edges), labels


def _shape(kind: str, size: int) -> tuple[int, list[tuple[int, int]], list[str], list[str]]:
    """Local shape: node count, edges, fine roles (anchor 0 fixed), coarse roles."""
    if kind == "house":
        edges = [(0, 1), (1, 2), (2, 3), (3, 0), (4, 0), (4, 1)]
        # roof is node 4; the only nontrivial automorphism swaps 0<->1, 2<->3
        fine = [f"house{i}" for i in range(5)]
        coarse = ["house-top", "house-top", "house-bottom", "house-bottom", "house-roof"]
        return 5, edges, fine, coarse
    leaves = list(range(1, size + 1))
    edges = [(0, v) for v in leaves]
    if kind == "star":
        return size + 1, edges, ["star-center"] + ["star-leaf"] * size, ["star-center"] + ["star-leaf"] * size
    # fan: consecutive leaves paired, an odd last leaf stays single
    edges += [(v, v + 1) for v in range(1, size, 2)]
    fine = ["fan-center"] + ["fan-blade" if v < size or size % 2 == 0 else "fan-tail" for v in leaves]
    coarse = ["fan-center"] + ["fan-leaf"] * size
    return size + 1, edges, fine, coarse


def gen_cycle_with_shapes(
    cycle_len: int,
    shapes: Sequence[ShapeSpec],
    perturb_edges: int = 0,
    seed: int = 0,
    roles: str = "structural",
) -> tuple[Graph, list[str]]:
    """Cycle with shapes hung off evenly spaced cycle nodes, plus random edges.

    Each shape's anchor (node 0 of the shape) is joined to one cycle node.
    ``roles="structural"`` labels every position distinctly (cycle nodes
    split by which shape, if any, they carry); ``roles="coarse"`` uses one
    label for all cycle nodes and merges shape positions that are
    symmetric when the shape is viewed on its own.
    """
    if cycle_len < 3:
        raise GraphError("cycle_len must be at least 3")
    if perturb_edges < 0:
        raise GraphError("perturb_edges must be nonnegative")
    if roles not in ("structural", "coarse"):
        raise GraphError(f"unknown role scheme {roles!r}")
    plan = [(s.kind, s.size) for s in shapes for _ in range(s.count)]
    if len(plan) > cycle_len:
        raise GraphError(f"{len(plan)} shapes do not fit on a cycle of {cycle_len} nodes")

    edges = [(i, (i + 1) % cycle_len) for i in range(cycle_len)]
    labels = ["cycle"] * cycle_len
    n = cycle_len
    spacing = cycle_len // len(plan) if plan else 0
    for slot, (kind, size) in enumerate(plan):
        anchor = slot * spacing
        m, local_edges, fine, coarse = _shape(kind, size)
        edges += [(n + a, n + b) for a, b in local_edges]
        edges.append((anchor, n))
        if roles == "structural":
            labels[anchor] = f"cycle@{kind}"
            labels += fine
        else:
            labels += coarse
        n += m

    g = Graph.from_edges(n, edges)
    if perturb_edges:
        g = _add_random_edges(g, perturb_edges, seed)
    return g, labels


def _add_random_edges(g: Graph, count: int, seed: int) -> Graph:
    n = g.node_count
    if g.edge_count + count > n * (n - 1) // 2:
        raise GraphError("not enough free node pairs for the requested perturbation")
    rng = np.random.default_rng(seed)
    present = set(g.edges())
    added = 0
    while added < count:
        u, v = sorted(int(x) for x in rng.choice(n, size=2, replace=False))
        if (u, v) not in present:
            present.add((u, v))
            added += 1
    return Graph.from_edges(n, sorted(present))


# Named (cycle_len, shapes) presets. "varied" interleaves house/fan/star so
# every shape type sits in the same neighbourhood on the cycle.
HOUSE = (ShapeSpec("house", 10),)
VARIED = (ShapeSpec("house", 1), ShapeSpec("fan", 1, 6), ShapeSpec("star", 1, 6)) * 3
STARS = (ShapeSpec("star", 10, 4),)
PRESETS = {"house": (30, HOUSE), "varied": (27, VARIED), "stars": (30, STARS)}


def gen_preset(name: str, perturb_edges: int = 0, seed: int = 0, roles: str = "structural") -> tuple[Graph, list[str]]:
    try:
        cycle_len, shapes = PRESETS[name]
    except KeyError:
        raise GraphError(f"unknown preset {name!r}; expected one of {sorted(PRESETS)}") from None
    return gen_cycle_with_shapes(cycle_len, shapes, perturb_edges, seed, roles)
