"""Undirected simple graphs with dense node ids, BFS rings and degree sequences."""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Sequence


class GraphError(ValueError):
    pass


@dataclass(frozen=True)
class Graph:
    """Immutable undirected, unweighted simple graph.

    Nodes are ``0..node_count-1``. ``node_ids`` keeps the original token of
    each dense id so outputs can be written back in the caller's naming.
    """

    node_count: int
    adjacency: tuple[tuple[int, ...], ...]
    node_ids: tuple[str, ...] = field(default=())

    def __post_init__(self):
        if len(self.adjacency) != self.node_count:
            raise GraphError("adjacency length does not match node_count")
        if not self.node_ids:
            object.__setattr__(self, "node_ids", tuple(str(i) for i in range(self.node_count)))
        elif len(self.node_ids) != self.node_count:
            raise GraphError("node_ids length does not match node_count")

    @classmethod
    def from_edges(
        cls,
        node_count: int,
        edges: Iterable[tuple[int, int]],
        node_ids: Sequence[str] | None = None,
    ) -> "Graph":
        """Build a graph, silently dropping self-loops and duplicate edges."""
        nbrs: list[set[int]] = [set() for _ in range(node_count)]
        for u, v in edges:
            if not (0 <= u < node_count and 0 <= v < node_count):
                raise GraphError(f"edge ({u}, {v}) references a node outside 0..{node_count - 1}")
            if u == v:
                continue
            nbrs[u].add(v)
            nbrs[v].add(u)
        adjacency = tuple(tuple(sorted(s)) for s in nbrs)
        return cls(node_count, adjacency, tuple(node_ids) if node_ids is not None else ())

    def degree(self, u: int) -> int:
        return len(self.adjacency[u])

    def degrees(self) -> list[int]:
        return [len(a) for a in self.adjacency]

    def edges(self) -> list[tuple[int, int]]:
        return [(u, v) for u in range(self.node_count) for v in self.adjacency[u] if u < v]

    @property
    def edge_count(self) -> int:
        return sum(len(a) for a in self.adjacency) // 2

    def has_edge(self, u: int, v: int) -> bool:
        return v in self.adjacency[u]

    def check(self) -> None:
        """Scan for symmetry, self-loop and duplicate violations."""
        for u, nb in enumerate(self.adjacency):
            if len(set(nb)) != len(nb):
                raise GraphError(f"duplicate edge at node {u}")
            for v in nb:
                if v == u:
                    raise GraphError(f"self-loop at node {u}")
                if u not in self.adjacency[v]:
                    raise GraphError(f"asymmetric edge {u}->{v}")


@dataclass(frozen=True)
class HopRings:
    source: int
    rings: tuple[frozenset[int], ...]

    def sizes(self) -> list[int]:
        return [len(r) for r in self.rings]


def _check_node(g: Graph, u: int) -> None:
    if not 0 <= u < g.node_count:
        raise GraphError(f"node {u} out of range for graph with {g.node_count} nodes")


def bfs_distances(g: Graph, u: int) -> list[int]:
    """Hop distance from ``u`` to every node; -1 marks unreachable nodes."""
    _check_node(g, u)
    dist = [-1] * g.node_count
    dist[u] = 0
    queue = deque([u])
    while queue:
        x = queue.popleft()
        for y in g.adjacency[x]:
            if dist[y] < 0:
                dist[y] = dist[x] + 1
                queue.append(y)
    return dist


def khop_rings(g: Graph, u: int, k_max: int) -> HopRings:
    """Nodes at exactly 0, 1, ..., k_max hops from ``u``.

    Always returns ``k_max + 1`` rings; rings past the eccentricity of ``u``
    are empty.
    """
    _check_node(g, u)
    if k_max < 0:
        raise GraphError("k_max must be nonnegative")
    rings: list[set[int]] = [set() for _ in range(k_max + 1)]
    for v, d in enumerate(bfs_distances(g, u)):
        if 0 <= d <= k_max:
            rings[d].add(v)
    return HopRings(u, tuple(frozenset(r) for r in rings))


def ordered_degree_sequence(g: Graph, ring: Iterable[int]) -> list[int]:
    return sorted(len(g.adjacency[v]) for v in ring)


def connected_components(g: Graph) -> list[list[int]]:
    seen = [False] * g.node_count
    comps = []
    for s in range(g.node_count):
        if seen[s]:
            continue
        comp = [v for v, d in enumerate(bfs_distances(g, s)) if d >= 0]
        for v in comp:
            seen[v] = True
        comps.append(comp)
    return comps


def diameter(g: Graph) -> int:
    """Largest eccentricity over all components (disconnected graphs allowed)."""
    if g.node_count == 0:
        raise GraphError("diameter of an empty graph is undefined")
    return max(max(bfs_distances(g, u)) for u in range(g.node_count))
