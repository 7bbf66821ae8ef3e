"""Command-line front end.

Subcommands:
    generate    write synthetic dynamic-network datasets (edge lists + manifest)
    cluster     run the full mirror-distance clustering pipeline on a dataset
    experiment  run the Monte-Carlo experiments (mirror-error, clustering)
    stability   replicate-concentration analysis of a saved dendrogram

Exit codes: 0 success, 2 usage error, 1 data or numeric error. All outputs
are written to a fresh directory, staged in a temp dir and renamed on
success. Thread count comes from --threads, then MIRRORCLUST_THREADS, then
the CPU count.
"""
from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .cluster import cut, separation_margin
from .errors import IngestionError, MirrorclustError
from .fileio import (
    atomic_output_dir,
    format_float,
    read_dense_snapshot,
    read_dendrogram_json,
    read_edge_list,
    read_labels_csv,
    read_manifest,
    write_dendrogram_json,
    write_dense_snapshot,
    write_edge_list,
    write_json,
    write_labeled_matrix_csv,
    write_labels_csv,
    write_manifest,
    write_matrix_csv,
)
from .netmodel import DynamicNetwork, sample_dynamic_network
from .pipeline import cluster_networks
from .simlab import (
    ChangepointConfig,
    ExperimentReport,
    RandomWalkConfig,
    changepoint_latents,
    random_walk_latents,
    run_clustering_experiment,
    run_mirror_error_experiment,
)
from .stability import contingency, jaccard_auc_matrix, max_frequency_curve, normalized_auc
from .util import derive_seed

MIRROR_ERROR_GRIDS = {"n": (50, 100, 200, 400, 800), "T": (20, 30, 40, 50, 70, 100)}
CLUSTERING_GRID = (20, 30, 40, 80, 120, 200)


class UsageError(Exception):
    """Malformed flag values; maps to exit code 2 like argparse errors."""


def resolve_threads(value: str | None) -> int:
    if value is None:
        value = os.environ.get("MIRRORCLUST_THREADS", "auto")
    if value == "auto":
        return os.cpu_count() or 1
    try:
        threads = int(value)
    except ValueError:
        raise UsageError(f"--threads must be an integer or 'auto', got {value!r}")
    if threads < 1:
        raise UsageError(f"thread count must be positive, got {threads}")
    return threads


def _parse_grid(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.split(",") if x.strip())
    except ValueError:
        raise UsageError(f"--grid must be comma-separated integers, got {text!r}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="mirrorclust", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"mirrorclust {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("generate", help="write a synthetic dataset")
    gen.add_argument("scenario", choices=("rw", "changepoint"))
    gen.add_argument("--n", type=int, required=True, help="vertex count")
    gen.add_argument("--T", type=int, default=None, help="time points (rw: 10, changepoint: 50)")
    gen.add_argument("--m", type=int, default=1, help="networks to generate (rw only)")
    gen.add_argument("--nets-per-cluster", type=int, default=20)
    gen.add_argument("--c-tilde", type=float, default=0.1)
    gen.add_argument("--p", type=float, default=0.4, help="step probability (rw only)")
    gen.add_argument("--p-before", type=float, default=0.45)
    gen.add_argument("--p-after", type=float, default=0.55)
    gen.add_argument("--change-t", type=int, default=None, help="default T//2")
    gen.add_argument("--delta", type=float, default=None, help="default (1-c_tilde)/T")
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--dense", action="store_true", help="write dense CSV snapshots")
    gen.add_argument("--out", type=Path, required=True)

    clu = sub.add_parser("cluster", help="run mirror-distance clustering on a dataset")
    clu.add_argument("--manifest", type=Path, required=True)
    clu.add_argument("--d", default="auto", help="embedding dimension, or 'auto' for the elbow rule")
    clu.add_argument("--dim-rule", choices=("fixed", "elbow"), default=None)
    clu.add_argument("--max-rank", type=int, default=10, help="elbow-rule search bound")
    clu.add_argument("--r", type=int, required=True, help="mirror dimension")
    clu.add_argument("--k", type=int, required=True, help="cluster count")
    clu.add_argument("--linkage", choices=("single", "complete", "average"), default="average")
    clu.add_argument("--seed", type=int, default=0)
    clu.add_argument("--threads", default=None)
    clu.add_argument("--dense", action="store_true", help="snapshots are dense CSV matrices")
    clu.add_argument("--out", type=Path, required=True)

    exp = sub.add_parser("experiment", help="run a Monte-Carlo experiment")
    exp.add_argument("name", choices=("mirror-error", "clustering"))
    exp.add_argument("--vary", choices=("n", "T"), default="n", help="mirror-error sweep axis")
    exp.add_argument("--grid", type=str, default=None, help="comma-separated sweep values")
    exp.add_argument("--replicates", type=int, default=100)
    exp.add_argument("--n", type=int, default=100, help="fixed n for the T sweep")
    exp.add_argument("--T", type=int, default=None, help="fixed T (mirror-error n sweep: 10)")
    exp.add_argument("--change-t", type=int, default=None, help="clustering changepoint, default T//2")
    exp.add_argument("--c-tilde", type=float, default=0.1)
    exp.add_argument("--p", type=float, default=0.4)
    exp.add_argument("--d", type=int, default=1)
    exp.add_argument("--r", type=int, default=1)
    exp.add_argument("--linkage", choices=("single", "complete", "average"), default="average")
    exp.add_argument("--seed", type=int, default=0)
    exp.add_argument("--threads", default=None)
    exp.add_argument("--out", type=Path, required=True)

    sta = sub.add_parser("stability", help="replicate-concentration analysis of a dendrogram")
    sta.add_argument("--dendrogram", type=Path, required=True)
    sta.add_argument("--labels", type=Path, required=True, help="CSV with header id,label, leaf order")
    sta.add_argument("--k-max", type=int, required=True)
    sta.add_argument("--variant", choices=("weighted", "support"), default="weighted")
    sta.add_argument("--out", type=Path, required=True)

    return parser


# -- generate ----------------------------------------------------------------


def _write_network(out: Path, net: DynamicNetwork, dense: bool) -> dict:
    netdir = out / net.id
    netdir.mkdir()
    paths = []
    for t, snap in enumerate(net.snapshots, start=1):
        name = f"{net.id}/t{t:03d}.{'csv' if dense else 'edges'}"
        if dense:
            write_dense_snapshot(out / name, snap)
        else:
            write_edge_list(out / name, snap)
        paths.append(name)
    return {"id": net.id, "snapshots": paths}


def cmd_generate(args: argparse.Namespace) -> int:
    T = args.T if args.T is not None else (10 if args.scenario == "rw" else 50)
    delta = args.delta if args.delta is not None else (1.0 - args.c_tilde) / T
    with atomic_output_dir(args.out) as tmp:
        entries = []
        if args.scenario == "rw":
            cfg = RandomWalkConfig(c_tilde=args.c_tilde, delta=delta, p=args.p, n=args.n, T=T)
            ids = [f"rw-{i:03d}" for i in range(args.m)]
            for net_id in ids:
                latents = random_walk_latents(cfg, derive_seed(args.seed, net_id))
                net = sample_dynamic_network(
                    latents, derive_seed(args.seed, net_id, "network"), network_id=net_id
                )
                entries.append(_write_network(tmp, net, args.dense))
        else:
            change_t = args.change_t if args.change_t is not None else T // 2
            base = RandomWalkConfig(
                c_tilde=args.c_tilde, delta=delta, p=args.p_before, n=args.n, T=T
            )
            cfgs = (
                ChangepointConfig(base=base, change_t=change_t,
                                  p_before=args.p_before, p_after=args.p_after),
                ChangepointConfig(base=base, change_t=change_t,
                                  p_before=args.p_after, p_after=args.p_before),
            )
            ids, labels = [], []
            for ci, cfg in enumerate(cfgs, start=1):
                for k in range(args.nets_per_cluster):
                    net_id = f"cp{ci}-{k:03d}"
                    latents = changepoint_latents(cfg, derive_seed(args.seed, net_id))
                    net = sample_dynamic_network(
                        latents, derive_seed(args.seed, net_id, "network"), network_id=net_id
                    )
                    entries.append(_write_network(tmp, net, args.dense))
                    ids.append(net_id)
                    labels.append(ci)
            write_labels_csv(tmp / "labels_true.csv", ids, labels)
        write_manifest(tmp / "manifest.json", m=len(entries), T=T, n=args.n, networks=entries)
    print(f"wrote {len(entries)} networks x {T} snapshots to {args.out}")
    return 0


# -- cluster -----------------------------------------------------------------


def _load_networks(manifest_path: Path, dense: bool) -> list[DynamicNetwork]:
    manifest = read_manifest(manifest_path)
    root = Path(manifest_path).parent
    reader = read_dense_snapshot if dense else read_edge_list
    networks = []
    for net in manifest["networks"]:
        snaps = []
        for rel in net["snapshots"]:
            snap = reader(root / rel)
            if snap.n != manifest["n"]:
                raise IngestionError(
                    f"{root / rel}: snapshot has {snap.n} vertices, manifest says {manifest['n']}"
                )
            snaps.append(snap)
        networks.append(DynamicNetwork(id=net["id"], snapshots=tuple(snaps)))
    return networks


def cmd_cluster(args: argparse.Namespace) -> int:
    if args.d == "auto":
        fixed_d = None
    else:
        try:
            fixed_d = int(args.d)
        except ValueError:
            raise UsageError(f"--d must be an integer or 'auto', got {args.d!r}")
    if args.dim_rule == "elbow":
        fixed_d = None
    elif args.dim_rule == "fixed" and fixed_d is None:
        raise UsageError("--dim-rule fixed requires an integer --d")
    threads = resolve_threads(args.threads)
    networks = _load_networks(args.manifest, args.dense)
    result = cluster_networks(
        networks, d=fixed_d, r=args.r, K=args.k, linkage=args.linkage,
        max_rank=args.max_rank, threads=threads,
    )
    ids = result.network_ids
    with atomic_output_dir(args.out) as tmp:
        (tmp / "mirrors").mkdir()
        (tmp / "distances").mkdir()
        coord_header = [f"c{j + 1}" for j in range(result.r)]
        for net_id, mir, dist in zip(ids, result.mirrors, result.per_network_distances):
            write_matrix_csv(tmp / "mirrors" / f"{net_id}.csv", mir.matrix, coord_header)
            write_matrix_csv(
                tmp / "distances" / f"{net_id}.csv", dist.matrix,
                [f"t{t + 1}" for t in range(dist.size)],
            )
        write_matrix_csv(tmp / "dstar.csv", result.dstar.matrix, list(ids))
        write_dendrogram_json(tmp / "dendrogram.json", result.dendrogram)
        write_labels_csv(tmp / "labels.csv", ids, result.labels.labels.tolist())
        margin = separation_margin(result.dstar, result.labels)
        write_json(tmp / "margin.json", {
            "max_within": margin.max_within,
            "min_between": None if margin.min_between == float("inf") else margin.min_between,
            "certified": margin.certified,
        })
        write_json(tmp / "run-metadata.json", {
            "command": "cluster",
            "config": {
                "manifest": str(args.manifest), "d": result.d, "dim_rule":
                    "elbow" if fixed_d is None else "fixed",
                "max_rank": args.max_rank, "r": args.r, "k": args.k,
                "linkage": args.linkage, "seed": args.seed, "threads": threads,
                "dense": bool(args.dense),
            },
            "versions": {
                "mirrorclust": __version__,
                "numpy": np.__version__,
                "python": sys.version.split()[0],
            },
        })
    print(f"clustered {len(ids)} networks (d={result.d}, r={result.r}, K={args.k}) -> {args.out}")
    return 0


# -- experiment ---------------------------------------------------------------


def _write_report(out: Path, report: ExperimentReport) -> None:
    with atomic_output_dir(out) as tmp:
        write_json(tmp / "report.json", report.to_dict())
        with open(tmp / "curve.csv", "w", newline="") as fh:
            fh.write("x,mean,sd,q05,q95\n")
            for cell in report.cells:
                fields = [cell.value, cell.mean, cell.sd, cell.q05, cell.q95]
                fh.write(",".join("nan" if x is None else format_float(x) for x in fields) + "\n")


def cmd_experiment(args: argparse.Namespace) -> int:
    threads = resolve_threads(args.threads)
    if args.name == "mirror-error":
        grid = _parse_grid(args.grid) if args.grid else MIRROR_ERROR_GRIDS[args.vary]
        T = args.T if args.T is not None else 10
        report = run_mirror_error_experiment(
            vary=args.vary, grid=grid, c_tilde=args.c_tilde, p=args.p, n=args.n, T=T,
            d=args.d, r=args.r, replicates=args.replicates, seed=args.seed, threads=threads,
        )
    else:
        grid = _parse_grid(args.grid) if args.grid else CLUSTERING_GRID
        T = args.T if args.T is not None else 50
        change_t = args.change_t if args.change_t is not None else T // 2
        report = run_clustering_experiment(
            n_grid=grid, replicates=args.replicates, seed=args.seed, threads=threads,
            T=T, change_t=change_t, c_tilde=args.c_tilde, d=args.d, r=args.r,
            linkage=args.linkage,
        )
    _write_report(args.out, report)
    print(f"experiment {args.name}: {len(report.grid)} cells x {args.replicates} replicates -> {args.out}")
    return 0


# -- stability -----------------------------------------------------------------


def cmd_stability(args: argparse.Namespace) -> int:
    dendro = read_dendrogram_json(args.dendrogram)
    ids, raw_labels = read_labels_csv(args.labels)
    if len(raw_labels) != dendro.leaves:
        raise IngestionError(
            f"{args.labels}: {len(raw_labels)} labels for {dendro.leaves} dendrogram leaves"
        )
    names: list[str] = []
    index: dict[str, int] = {}
    for lab in raw_labels:
        if lab not in index:
            index[lab] = len(names) + 1
            names.append(lab)
    labels_true = np.array([index[lab] for lab in raw_labels], dtype=np.int64)
    L = len(names)
    K_max = args.k_max

    curve = max_frequency_curve(dendro, labels_true, K_max)
    auc = normalized_auc(curve)
    _, jaccard_auc = jaccard_auc_matrix(dendro, labels_true, K_max, variant=args.variant)
    with atomic_output_dir(args.out) as tmp:
        for K in range(1, K_max + 1):
            table = contingency(labels_true, cut(dendro, K), L, K)
            write_labeled_matrix_csv(
                tmp / f"contingency_K{K}.csv", table.counts.astype(float),
                names, [f"k{j + 1}" for j in range(K)], corner="label",
            )
        write_labeled_matrix_csv(
            tmp / "max_rate_curve.csv", curve.max_rate, names,
            [f"K{k}" for k in curve.k_values], corner="label",
        )
        write_labeled_matrix_csv(
            tmp / "normalized_auc.csv", auc[:, None], names, ["normalized_auc"], corner="label",
        )
        write_labeled_matrix_csv(tmp / "jaccard_auc.csv", jaccard_auc, names, names, corner="label")
    print(f"stability analysis for {dendro.leaves} leaves, {L} labels, K_max={K_max} -> {args.out}")
    return 0


# -- entry ---------------------------------------------------------------------


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    handlers = {
        "generate": cmd_generate,
        "cluster": cmd_cluster,
        "experiment": cmd_experiment,
        "stability": cmd_stability,
    }
    try:
        return handlers[args.command](args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    except MirrorclustError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def entrypoint() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
