"""Reading and writing edge lists, labels, embeddings, distance caches and run configs."""
from __future__ import annotations

import csv
import hashlib
import logging
import os
import struct
from contextlib import contextmanager
from dataclasses import dataclass, fields
from pathlib import Path
from typing import IO, Iterable, Iterator, Sequence

import numpy as np

from .distance import DistanceConfig
from .evaluation import LabeledDataset
from .graph import Graph, GraphError
from .stress import SolverConfig

log = logging.getLogger(__name__)

CACHE_MAGIC = b"RDM1"


class FormatError(ValueError):
    pass


class CacheCorruptError(FormatError):
    pass


# -- edge lists ---------------------------------------------------------------

@dataclass(frozen=True)
class EdgeListStats:
    duplicates: int
    self_loops: int


def parse_edge_list(stream: IO[str] | Iterable[str]) -> tuple[Graph, EdgeListStats]:
    """Parse ``u v`` lines; ids are densified in order of first appearance."""
    index: dict[str, int] = {}
    seen: set[tuple[int, int]] = set()
    edges = []
    dup = loops = 0
    for lineno, raw in enumerate(stream, 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 2:
            raise FormatError(f"line {lineno}: expected two node tokens, got {len(parts)}: {line!r}")
        u, v = (index.setdefault(p, len(index)) for p in parts)
        if u == v:
            loops += 1
            continue
        key = (min(u, v), max(u, v))
        if key in seen:
            dup += 1
            continue
        seen.add(key)
        edges.append(key)
    if not index:
        raise FormatError("edge list contains no nodes")
    return Graph.from_edges(len(index), edges, list(index)), EdgeListStats(dup, loops)


def load_edge_list(stream: IO[str] | Iterable[str]) -> Graph:
    g, stats = parse_edge_list(stream)
    if stats.duplicates or stats.self_loops:
        log.warning("dropped %d duplicate edge(s) and %d self-loop(s)", stats.duplicates, stats.self_loops)
    return g


def read_edge_list(path: str | os.PathLike) -> Graph:
    with open(path, encoding="utf-8") as fh:
        return load_edge_list(fh)


def write_edge_list(g: Graph, stream: IO[str]) -> None:
    for u, v in g.edges():
        stream.write(f"{g.node_ids[u]} {g.node_ids[v]}\n")


# -- atomic output handling -----------------------------------------------------

class OutputSet:
    """Collects files written by one command so a failure can remove all of them."""

    def __init__(self):
        self.paths: list[Path] = []

    @contextmanager
    def open(self, path: str | os.PathLike, mode: str = "w") -> Iterator[IO]:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        tmp = path.with_name(path.name + ".part")
        kwargs = {} if "b" in mode else {"encoding": "utf-8", "newline": "\n"}
        try:
            with open(tmp, mode, **kwargs) as fh:
                yield fh
            os.replace(tmp, path)
        finally:
            if tmp.exists():
                tmp.unlink()
        self.paths.append(path)

    def discard(self) -> None:
        for p in self.paths:
            if p.exists():
                p.unlink()
        self.paths.clear()


@contextmanager
def outputs() -> Iterator[OutputSet]:
    out = OutputSet()
    try:
        yield out
    except BaseException:
        out.discard()
        raise


# -- labels -------------------------------------------------------------------------

def read_labels(path: str | os.PathLike, node_ids: Sequence[str]) -> LabeledDataset:
    """Read a ``node,label`` CSV and align it to ``node_ids``.

    Class ids follow first appearance in the file.
    """
    position = {nid: i for i, nid in enumerate(node_ids)}
    names: list[str | None] = [None] * len(node_ids)
    unknown, dupes = [], []
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or [h.strip() for h in header] != ["node", "label"]:
            raise FormatError(f"{path}: expected header 'node,label'")
        classes: dict[str, int] = {}
        for lineno, row in enumerate(reader, 2):
            if not row:
                continue
            if len(row) != 2:
                raise FormatError(f"{path}:{lineno}: expected 2 fields, got {len(row)}")
            node, label = row[0].strip(), row[1].strip()
            if node not in position:
                unknown.append(node)
                continue
            i = position[node]
            if names[i] is not None:
                dupes.append(node)
                continue
            names[i] = label
            classes.setdefault(label, len(classes))
    if unknown:
        raise FormatError(f"{path}: label rows for nodes not in the graph: {', '.join(unknown)}")
    if dupes:
        raise FormatError(f"{path}: duplicate label rows for nodes: {', '.join(dupes)}")
    missing = [node_ids[i] for i, x in enumerate(names) if x is None]
    if missing:
        raise FormatError(f"{path}: no label for nodes: {', '.join(missing[:20])}")
    labels = np.asarray([classes[x] for x in names], dtype=int)
    return LabeledDataset(labels, tuple(classes))


def write_labels(labels: LabeledDataset | Sequence[str], node_ids: Sequence[str], stream: IO[str]) -> None:
    names = labels.names() if isinstance(labels, LabeledDataset) else list(labels)
    if len(names) != len(node_ids):
        raise FormatError("labels and node ids differ in length")
    w = csv.writer(stream, lineterminator="\n")
    w.writerow(["node", "label"])
    for nid, name in zip(node_ids, names):
        w.writerow([nid, name])


# -- embeddings ---------------------------------------------------------------------

def _fmt(v: float) -> str:
    return format(float(v), ".17g")


def write_embedding(X: np.ndarray, node_ids: Sequence[str], stream: IO[str]) -> None:
    X = np.asarray(X, dtype=float)
    if X.ndim != 2 or X.shape[0] != len(node_ids):
        raise FormatError("embedding rows and node ids differ")
    stream.write(",".join(["node"] + [f"x{j}" for j in range(X.shape[1])]) + "\n")
    for nid, row in zip(node_ids, X):
        stream.write(",".join([nid] + [_fmt(v) for v in row]) + "\n")


def read_embedding(path: str | os.PathLike) -> tuple[list[str], np.ndarray]:
    with open(path, encoding="utf-8") as fh:
        lines = fh.read().splitlines()
    if not lines:
        raise FormatError(f"{path}: empty embedding file")
    header = lines[0].split(",")
    if header[0] != "node" or len(header) < 2:
        raise FormatError(f"{path}: expected header 'node,x0,...'")
    d = len(header) - 1
    if header[1:] != [f"x{j}" for j in range(d)]:
        raise FormatError(f"{path}: coordinate columns must be named x0..x{d - 1}")
    ids, rows = [], []
    for lineno, line in enumerate(lines[1:], 2):
        if not line:
            continue
        parts = line.split(",")
        if len(parts) != d + 1:
            raise FormatError(f"{path}:{lineno}: expected {d + 1} fields, got {len(parts)}")
        try:
            rows.append([float(p) for p in parts[1:]])
        except ValueError:
            raise FormatError(f"{path}:{lineno}: non-numeric coordinate") from None
        ids.append(parts[0])
    if not rows:
        raise FormatError(f"{path}: no embedding rows")
    return ids, np.asarray(rows, dtype=float)


def write_trace(stresses: Sequence[float], stream: IO[str]) -> None:
    stream.write("iter,stress\n")
    for i, s in enumerate(stresses):
        stream.write(f"{i},{_fmt(s)}\n")


def write_report(rows: Iterable[tuple[str, float]], stream: IO[str]) -> None:
    stream.write("metric,value\n")
    for name, value in rows:
        stream.write(f"{name},{_fmt(value)}\n")


# -- distance matrices ------------------------------------------------------------------

def content_key(g: Graph, cfg: DistanceConfig) -> int:
    """64-bit hash of the graph's edge list and the distance settings."""
    h = hashlib.blake2b(digest_size=8)
    h.update(f"{g.node_count}\n".encode())
    h.update("\n".join(g.node_ids).encode("utf-8"))
    h.update(b"\x00")
    h.update("\n".join(f"{u} {v}" for u, v in g.edges()).encode())
    h.update(b"\x00")
    h.update(cfg.describe().encode())
    return int.from_bytes(h.digest(), "little")


def cache_distances(D: np.ndarray, key: int, stream: IO[bytes]) -> None:
    D = np.asarray(D, dtype=float)
    n = D.shape[0]
    stream.write(CACHE_MAGIC)
    stream.write(struct.pack("<QQ", n, key))
    stream.write(D[np.triu_indices(n)].astype("<f8").tobytes())


def load_cached(path: str | os.PathLike, key: int) -> np.ndarray | None:
    """Return the cached matrix, or None when the file is absent or holds another key."""
    try:
        data = Path(path).read_bytes()
    except FileNotFoundError:
        return None
    if len(data) < 20 or data[:4] != CACHE_MAGIC:
        raise CacheCorruptError(f"{path}: not a distance cache (bad magic or header)")
    n, stored = struct.unpack("<QQ", data[4:20])
    if stored != key:
        return None
    count = n * (n + 1) // 2
    if len(data) != 20 + 8 * count:
        raise CacheCorruptError(f"{path}: expected {count} values, file is truncated or padded")
    tri = np.frombuffer(data, dtype="<f8", offset=20, count=count)
    D = np.zeros((n, n))
    iu = np.triu_indices(n)
    D[iu] = tri
    D.T[iu] = tri
    return D


def write_distance_csv(D: np.ndarray, node_ids: Sequence[str], stream: IO[str]) -> None:
    stream.write(",".join(node_ids) + "\n")
    for row in np.asarray(D, dtype=float):
        stream.write(",".join(_fmt(v) for v in row) + "\n")


# -- run configuration ---------------------------------------------------------------------

@dataclass
class RunConfig:
    """Flat ``key=value`` description of one embedding/evaluation run."""

    edges: str
    labels: str | None = None
    out_dir: str = "."
    k: int | None = None
    weights: tuple[float, ...] | None = None
    radius: int = 1
    d: int = 2
    epsilon: float = 1e-3
    max_iters: int = 1000
    seed: int = 0
    init_scale: float = 1.0
    n_init: int = 1
    folds: int = 10
    runs: int = 25

    def distance_config(self) -> DistanceConfig:
        return DistanceConfig(self.k, self.weights, self.radius)

    def solver_config(self) -> SolverConfig:
        return SolverConfig(self.d, self.epsilon, self.max_iters, self.seed, self.init_scale, self.n_init)


def _parse_value(name: str, raw: str):
    if name in ("edges", "labels", "out_dir"):
        return raw
    if name == "weights":
        return tuple(float(x) for x in raw.split(","))
    if name in ("epsilon", "init_scale"):
        return float(raw)
    return int(raw)


def read_run_config(path: str | os.PathLike) -> RunConfig:
    known = {f.name for f in fields(RunConfig)}
    values = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise FormatError(f"{path}:{lineno}: expected key=value")
            key, value = (s.strip() for s in line.split("=", 1))
            if key not in known:
                raise FormatError(f"{path}:{lineno}: unknown key {key!r}")
            if value.lower() in ("", "none"):
                values[key] = None
                continue
            try:
                values[key] = _parse_value(key, value)
            except ValueError:
                raise FormatError(f"{path}:{lineno}: bad value for {key}: {value!r}") from None
    if not values.get("edges"):
        raise FormatError(f"{path}: missing required key 'edges'")
    base = Path(path).parent
    for key in ("edges", "labels"):
        if values.get(key) is not None:
            p = Path(values[key])
            if not p.is_absolute():
                p = base / p
            if not p.exists():
                raise FormatError(f"{path}: {key} path does not exist: {p}")
            values[key] = str(p)
    return RunConfig(**values)


def write_run_config(cfg: RunConfig, stream: IO[str]) -> None:
    for f in fields(RunConfig):
        v = getattr(cfg, f.name)
        if v is None:
            text = "none"
        elif f.name == "weights":
            text = ",".join(repr(x) for x in v)
        else:
            text = str(v)
        stream.write(f"{f.name}={text}\n")
