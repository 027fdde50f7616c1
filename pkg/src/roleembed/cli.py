"""Command-line interface: generate, embed, eval-cluster, eval-classify, plot."""
from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

import numpy as np

from . import experiments
from .distance import DistanceConfig, distance_matrix
from .evaluation import LabeledDataset, classify_kfold, evaluate_clustering
from .formats import (
    FormatError,
    cache_distances,
    content_key,
    load_cached,
    outputs,
    read_edge_list,
    read_embedding,
    read_labels,
    read_run_config,
    write_distance_csv,
    write_edge_list,
    write_embedding,
    write_labels,
    write_report,
    write_trace,
)
from .generators import PRESETS, ShapeSpec, gen_barbell, gen_cycle_with_shapes
from .graph import GraphError
from .plot import PlotSpec, render_svg
from .stress import SolverConfig, embed

log = logging.getLogger("roleembed")


class CommandError(Exception):
    pass


def _say(args, msg: str) -> None:
    if not args.quiet:
        print(msg)


def _weights(text: str) -> tuple[float, ...]:
    try:
        return tuple(float(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"weights must be comma-separated numbers, got {text!r}") from None


def _add_solver_flags(p: argparse.ArgumentParser, d: int, epsilon: float, n_init: int) -> None:
    p.add_argument("-d", "--dim", type=int, default=d, help=f"embedding dimension d (default {d})")
    p.add_argument("--epsilon", type=float, default=epsilon,
                   help=f"stop when the relative stress change is below epsilon (default {epsilon:g})")
    p.add_argument("--max-iters", type=int, default=1000, help="iteration cap per start (default 1000)")
    p.add_argument("--n-init", type=int, default=n_init, help=f"random starts, lowest stress kept (default {n_init})")
    p.add_argument("--init-scale", type=float, default=1.0, help="initial layout drawn from U[-s, s]^d (default 1)")


def _add_distance_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("-k", type=int, default=None, help="hop depth k (default: graph diameter)")
    p.add_argument("-w", "--weights", type=_weights, default=None,
                   help="comma-separated per-hop weights w_0..w_k (default: all 1)")
    p.add_argument("--radius", type=int, default=1, help="FastDTW radius (default 1)")


def _solver(args) -> SolverConfig:
    return SolverConfig(args.dim, args.epsilon, args.max_iters, args.seed, args.init_scale, args.n_init)


def _out(args, given: str | None, default_name: str) -> Path:
    return Path(given) if given else Path(args.out_dir) / default_name


# -- commands -----------------------------------------------------------------------------

def cmd_generate(args) -> None:
    if args.kind == "barbell":
        g, labels = gen_barbell(args.clique, args.bridge)
        stem = f"barbell_{args.clique}_{args.bridge}"
    else:
        cycle_len, shapes = PRESETS[args.preset]
        custom = [ShapeSpec("house", args.houses)] if args.houses else []
        custom += [ShapeSpec("fan", args.fans, args.fan_size)] if args.fans else []
        custom += [ShapeSpec("star", args.stars, args.star_size)] if args.stars else []
        if custom:
            shapes = tuple(custom)
        if args.cycle:
            cycle_len = args.cycle
        g, labels = gen_cycle_with_shapes(cycle_len, shapes, args.perturb, args.seed, args.roles)
        stem = f"shapes_{args.preset}" if not custom else "shapes"
    edges_path = _out(args, args.edges, f"{stem}.edges")
    labels_path = _out(args, args.labels, f"{stem}.labels.csv")
    with outputs() as out:
        with out.open(edges_path) as fh:
            write_edge_list(g, fh)
        with out.open(labels_path) as fh:
            write_labels(labels, g.node_ids, fh)
    _say(args, f"{g.node_count} nodes, {g.edge_count} edges, {len(set(labels))} role classes")
    _say(args, f"wrote {edges_path} and {labels_path}")


def _distances(args, g, cfg: DistanceConfig) -> np.ndarray:
    if not args.cache_dir:
        return distance_matrix(g, cfg, workers=None)
    key = content_key(g, cfg)
    path = Path(args.cache_dir) / f"{key:016x}.rdm"
    D = load_cached(path, key)
    if D is not None and D.shape[0] == g.node_count:
        log.info("distance cache hit: %s", path)
        return D
    D = distance_matrix(g, cfg, workers=None)
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_name(path.name + ".part")
    with open(tmp, "wb") as fh:
        cache_distances(D, key, fh)
    tmp.replace(path)
    return D


def cmd_embed(args) -> None:
    if not args.edges:
        raise CommandError("no edge list given (positional EDGES or edges= in --config)")
    try:
        g = read_edge_list(args.edges)
    except FileNotFoundError:
        raise CommandError(f"edge list not found: {args.edges}") from None
    cfg = DistanceConfig(args.k, args.weights, args.radius)
    D = _distances(args, g, cfg)
    X, trace = embed(D, _solver(args))
    stem = Path(args.edges).name.split(".")[0]
    emb_path = _out(args, args.out, f"{stem}.embedding.csv")
    trace_path = _out(args, args.trace, f"{stem}.trace.csv")
    with outputs() as out:
        with out.open(emb_path) as fh:
            write_embedding(X, g.node_ids, fh)
        with out.open(trace_path) as fh:
            write_trace(trace.stresses, fh)
        if args.distances_csv:
            with out.open(args.distances_csv) as fh:
                write_distance_csv(D, g.node_ids, fh)
    _say(args, f"final stress {trace.stresses[-1]:.10g} after {trace.iterations} iterations "
               f"({'converged' if trace.converged else 'iteration cap reached'})")
    _say(args, f"wrote {emb_path} and {trace_path}")


def _aligned(embedding: str, labels: str) -> tuple[list[str], np.ndarray, LabeledDataset]:
    ids, X = read_embedding(embedding)
    truth = read_labels(labels, ids)
    return ids, X, truth


def cmd_eval_cluster(args) -> None:
    rows: list[tuple[str, float]]
    if args.generate:
        solver = _solver(args)
        res = experiments.cluster_protocol(args.generate, args.runs, args.perturb, args.seed, solver,
                                           DistanceConfig(args.k, args.weights, args.radius))
        m, b = res.mean, res.baseline
        rows = [("homogeneity", m.homogeneity), ("completeness", m.completeness), ("silhouette", m.silhouette),
                ("baseline_homogeneity", b.homogeneity), ("baseline_completeness", b.completeness),
                ("baseline_silhouette", b.silhouette), ("runs", args.runs)]
    else:
        if not (args.embedding and args.labels):
            raise CommandError("eval-cluster needs --embedding and --labels, or --generate PRESET")
        _, X, truth = _aligned(args.embedding, args.labels)
        rep = evaluate_clustering(X, truth)
        rows = [("homogeneity", rep.homogeneity), ("completeness", rep.completeness),
                ("silhouette", rep.silhouette), ("runs", 1)]
    path = _out(args, args.report, "cluster_report.csv")
    with outputs() as out:
        with out.open(path) as fh:
            write_report(rows, fh)
    for name, value in rows:
        _say(args, f"{name:>22}  {value:.4f}")


def cmd_eval_classify(args) -> None:
    _, X, truth = _aligned(args.embedding, args.labels)
    rep = classify_kfold(X, truth, args.folds, args.seed)
    rows = [(f"fold{i}", s) for i, s in enumerate(rep.fold_scores)] + [
        ("mean_fold_micro_f1", float(np.mean(rep.fold_scores))), ("micro_f1", rep.micro_f1)]
    path = _out(args, args.report, "classify_report.csv")
    with outputs() as out:
        with out.open(path) as fh:
            write_report(rows, fh)
    for i, s in enumerate(rep.fold_scores):
        _say(args, f"fold {i:2d}  micro-F1 {s:.4f}")
    _say(args, f"mean over folds {np.mean(rep.fold_scores):.4f}; pooled micro-F1 {rep.micro_f1:.4f}")


def cmd_plot(args) -> None:
    ids, X = read_embedding(args.embedding)
    names = read_labels(args.labels, ids).names() if args.labels else None
    spec = PlotSpec(args.width, args.height, args.radius)
    svg = render_svg(X, names, spec)
    path = _out(args, args.out, Path(args.embedding).name.split(".")[0] + ".svg")
    with outputs() as out:
        with out.open(path) as fh:
            fh.write(svg)
    _say(args, f"wrote {path}")


# -- parser -------------------------------------------------------------------------------------

def _config_defaults(path: str) -> dict:
    rc = read_run_config(path)
    return {"edges": rc.edges, "k": rc.k, "weights": rc.weights, "radius": rc.radius, "dim": rc.d,
            "epsilon": rc.epsilon, "max_iters": rc.max_iters, "seed": rc.seed, "init_scale": rc.init_scale,
            "n_init": rc.n_init, "out_dir": rc.out_dir}


def build_parser(embed_defaults: dict | None = None) -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="random seed (default 0)")
    common.add_argument("--out-dir", default=".", help="directory for default output paths (default .)")
    common.add_argument("--cache-dir", default=None, help="directory for the binary distance-matrix cache")
    common.add_argument("--quiet", action="store_true", help="only print errors")

    parser = argparse.ArgumentParser(prog="roleembed", description="Structural role embeddings via stress majorization.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", parents=[common], help="write a synthetic graph and its role labels")
    p.add_argument("kind", choices=["barbell", "shapes"])
    p.add_argument("--clique", type=int, default=10, help="barbell clique size (default 10)")
    p.add_argument("--bridge", type=int, default=11, help="barbell bridge length (default 11)")
    p.add_argument("--preset", choices=sorted(PRESETS), default="house", help="shape layout preset (default house)")
    p.add_argument("--cycle", type=int, default=None, help="cycle length (overrides the preset)")
    p.add_argument("--houses", type=int, default=0)
    p.add_argument("--fans", type=int, default=0)
    p.add_argument("--stars", type=int, default=0)
    p.add_argument("--fan-size", type=int, default=6)
    p.add_argument("--star-size", type=int, default=6)
    p.add_argument("--perturb", type=int, default=0, help="random extra edges (default 0)")
    p.add_argument("--roles", choices=["structural", "coarse"], default="structural")
    p.add_argument("--edges", default=None, help="edge list output path")
    p.add_argument("--labels", default=None, help="label CSV output path")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("embed", parents=[common], help="compute role distances and embed them")
    p.add_argument("edges", nargs="?", help="edge list file")
    p.add_argument("--config", default=None, help="key=value run configuration file")
    _add_distance_flags(p)
    _add_solver_flags(p, d=2, epsilon=1e-3, n_init=1)
    p.add_argument("--out", default=None, help="embedding CSV path")
    p.add_argument("--trace", default=None, help="stress trace CSV path")
    p.add_argument("--distances-csv", default=None, help="also export the distance matrix as CSV")
    p.set_defaults(func=cmd_embed, **(embed_defaults or {}))

    p = sub.add_parser("eval-cluster", parents=[common], help="single-linkage clustering scores")
    p.add_argument("--embedding", default=None)
    p.add_argument("--labels", default=None)
    p.add_argument("--generate", choices=sorted(PRESETS), default=None,
                   help="regenerate and embed a shape preset for every run instead")
    p.add_argument("--runs", type=int, default=25)
    p.add_argument("--perturb", type=int, default=0)
    _add_distance_flags(p)
    cs = experiments.CLUSTER_SOLVER
    _add_solver_flags(p, d=cs.d, epsilon=cs.epsilon, n_init=cs.n_init)
    p.add_argument("--report", default=None, help="metric,value CSV path")
    p.set_defaults(func=cmd_eval_cluster)

    p = sub.add_parser("eval-classify", parents=[common], help="k-fold linear classification micro-F1")
    p.add_argument("embedding")
    p.add_argument("labels")
    p.add_argument("--folds", type=int, default=10)
    p.add_argument("--report", default=None, help="metric,value CSV path")
    p.set_defaults(func=cmd_eval_classify)

    p = sub.add_parser("plot", parents=[common], help="SVG scatter plot of an embedding")
    p.add_argument("embedding")
    p.add_argument("--labels", default=None)
    p.add_argument("--out", default=None, help="SVG path")
    p.add_argument("--width", type=int, default=640)
    p.add_argument("--height", type=int, default=480)
    p.add_argument("--radius", type=float, default=5.0)
    p.set_defaults(func=cmd_plot)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.ERROR if args.quiet else logging.WARNING, format="%(levelname)s: %(message)s")
    try:
        if args.command == "embed" and args.config:
            # flags given explicitly still win over the file
            args = build_parser(_config_defaults(args.config)).parse_args(argv)
        args.func(args)
    except (CommandError, FormatError, GraphError, FileNotFoundError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
