"""Command-line benchmark harness.

Subcommands: gen (datasets and query workloads), gt (brute-force ground
truth), build (kgraph / dpg-angular / dpg-counting indexes), search
(pool-size sweep to CSV), hardness (RC and LID report), minhops
(reachability histogram).  Exit codes: 0 success, 2 usage error, 3
malformed input file.
"""

from __future__ import annotations

import argparse
import os
import sys
import time

from . import __version__, bench, hardness, vecio, workloads
from .diversify import DpgParams, build_dpg_from_knn
from .errors import FormatError
from .exact import build_ground_truth
from .graph import DPG
from .nndescent import NnDescentParams, build_knn_graph

ALGOS = ("kgraph", "dpg-angular", "dpg-counting")


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return value


def _pool_list(text: str) -> list[int]:
    try:
        sizes = [int(part) for part in text.split(",") if part.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad pool list {text!r}") from exc
    if not sizes or any(s < 1 for s in sizes):
        raise argparse.ArgumentTypeError(f"pool sizes must be positive, got {text!r}")
    return sizes


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dpgraph",
        description="Build, search, and measure diversified proximity graph indexes.",
    )
    parser.add_argument("--version", action="version", version=f"dpgraph {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate a synthetic dataset or query workload")
    mode = p.add_mutually_exclusive_group(required=True)
    mode.add_argument("--preset", choices=sorted(workloads.PRESETS), help="named workload")
    mode.add_argument("--kind", choices=("ball", "gauss", "line"), help="custom generator")
    mode.add_argument("--perturb", metavar="FVECS", help="displace existing queries by --delta")
    p.add_argument("--n", type=_positive_int, help="number of points (with --kind)")
    p.add_argument("--d", type=_positive_int, help="dimensions (with --kind)")
    p.add_argument("--clusters", type=_positive_int, default=1000, help="gauss: cluster count")
    p.add_argument("--box", type=float, default=10.0, help="gauss: center range upper bound")
    p.add_argument("--sigma", type=float, default=1.0, help="gauss: per-axis noise scale")
    p.add_argument("--delta", type=float, help="perturbation distance (with --perturb)")
    p.add_argument("--queries-out", help="also split off held-out queries to this fvecs file")
    p.add_argument("--num-queries", type=_positive_int, default=200, help="held-out query count")
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--out", required=True, help="output fvecs path")
    p.set_defaults(func=_cmd_gen)

    p = sub.add_parser("gt", help="exact ground truth by brute-force scan")
    p.add_argument("--data", required=True, help="dataset fvecs")
    p.add_argument("--queries", required=True, help="queries fvecs")
    p.add_argument("--k", type=_positive_int, default=20)
    p.add_argument("--out", required=True, help="output prefix (.ivecs/.fvecs/.json)")
    p.set_defaults(func=_cmd_gt)

    p = sub.add_parser("build", help="build a graph index")
    p.add_argument("--data", required=True, help="dataset fvecs")
    p.add_argument("--algo", choices=ALGOS, default="dpg-counting")
    p.add_argument("--K", type=_positive_int, default=None, help="K-NN graph out-degree")
    p.add_argument("--kappa", type=_positive_int, default=20, help="diversified degree")
    p.add_argument("--rho", type=float, default=0.5, help="NN-descent sample rate")
    p.add_argument("--zeta", type=float, default=0.002, help="NN-descent termination fraction")
    p.add_argument("--max-iters", type=_positive_int, default=30)
    p.add_argument("--seed", type=int, default=42)
    p.add_argument(
        "--threads",
        type=_positive_int,
        default=1,
        help="build threads (this implementation always builds on one thread)",
    )
    p.add_argument("--out", required=True, help="output index path")
    p.set_defaults(func=_cmd_build)

    p = sub.add_parser("search", help="sweep pool sizes over an index, write CSV")
    p.add_argument("--data", required=True, help="dataset fvecs")
    p.add_argument("--index", required=True, help="index file from build")
    p.add_argument("--queries", required=True, help="queries fvecs")
    p.add_argument("--gt", required=True, help="ground truth prefix from gt")
    p.add_argument("--k", type=_positive_int, default=20)
    p.add_argument("--pool", type=_pool_list, default=[20, 40, 80, 160], metavar="L1,L2,...")
    p.add_argument("--entries", type=_positive_int, default=10, help="entry points per query")
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--out", required=True, help="output CSV path")
    p.set_defaults(func=_cmd_search)

    p = sub.add_parser("hardness", help="relative contrast and LID of a workload")
    p.add_argument("--data", required=True, help="dataset fvecs")
    p.add_argument("--queries", required=True, help="queries fvecs")
    p.add_argument("--k", type=_positive_int, default=20)
    p.add_argument("--lid-neighbors", type=_positive_int, default=100)
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--out", required=True, help="output CSV path")
    p.set_defaults(func=_cmd_hardness)

    p = sub.add_parser("minhops", help="hop histogram from all points to each query's k-NN set")
    p.add_argument("--index", required=True, help="index file from build")
    p.add_argument("--gt", required=True, help="ground truth prefix from gt")
    p.add_argument("--out", required=True, help="output CSV path")
    p.set_defaults(func=_cmd_minhops)
    return parser


def _cmd_gen(args) -> int:
    if args.perturb is not None:
        if args.delta is None:
            raise ValueError("--perturb requires --delta")
        queries = vecio.load_queries(args.perturb)
        moved = workloads.perturb_queries(queries, args.delta, seed=args.seed)
        vecio.write_fvecs(args.out, moved.data)
        print(f"perturbed {moved.m} queries by delta={args.delta:g} seed={args.seed} -> {args.out}")
        return 0
    if args.preset is not None:
        ds = workloads.make_preset(args.preset, seed=args.seed)
        label = args.preset
    else:
        if args.n is None or args.d is None:
            raise ValueError("--kind requires --n and --d")
        if args.kind == "ball":
            ds = workloads.gen_random_ball(args.n, args.d, seed=args.seed)
        elif args.kind == "gauss":
            ds = workloads.gen_gauss_clusters(
                args.n, args.d, num_clusters=args.clusters,
                box_hi=args.box, sigma=args.sigma, seed=args.seed,
            )
        else:
            ds = workloads.gen_line(args.n, args.d)
        label = args.kind
    if args.queries_out is not None:
        ds, queries = workloads.split_queries(ds, args.num_queries, seed=args.seed)
        vecio.write_fvecs(args.queries_out, queries.data)
        print(f"queries: m={queries.m} d={queries.d} -> {args.queries_out}")
    vecio.write_fvecs(args.out, ds.data)
    print(f"dataset {label}: n={ds.n} d={ds.d} seed={args.seed} -> {args.out}")
    return 0


def _cmd_gt(args) -> int:
    ds = vecio.load_dataset(args.data)
    queries = vecio.load_queries(args.queries)
    if queries.d != ds.d:
        raise ValueError(f"queries have d={queries.d} but dataset has d={ds.d}")
    gt = build_ground_truth(ds, queries, args.k)
    vecio.save_ground_truth(args.out, gt)
    print(
        f"ground truth: m={gt.m} k={gt.k} baseline_time={gt.baseline_time:.6g}s -> {args.out}.*"
    )
    return 0


def _cmd_build(args) -> int:
    ds = vecio.load_dataset(args.data)
    if args.threads > 1:
        print("note: multi-threaded build is not implemented; using one thread", file=sys.stderr)
    if args.algo == "kgraph":
        K = args.K if args.K is not None else 40
    else:
        K = args.K if args.K is not None else 2 * args.kappa
    nn_params = NnDescentParams(
        n_neighbors=K,
        sample_rate=args.rho,
        termination=args.zeta,
        max_iters=args.max_iters,
        seed=args.seed,
    )
    t0 = time.perf_counter()
    graph = build_knn_graph(ds, nn_params)
    if args.algo != "kgraph":
        method = "angular" if args.algo == "dpg-angular" else "counting"
        graph = build_dpg_from_knn(ds, graph, DpgParams(kappa=args.kappa, method=method))
    elapsed = time.perf_counter() - t0
    vecio.save_index(args.out, graph)
    size = os.path.getsize(args.out)
    extra = f" kappa={args.kappa}" if graph.kind == DPG else ""
    print(
        f"built {args.algo}: n={graph.n} K={K}{extra} edges={graph.num_edges} "
        f"seed={args.seed} build_time={elapsed:.6g}s index_bytes={size} -> {args.out}"
    )
    return 0


def _cmd_search(args) -> int:
    ds = vecio.load_dataset(args.data)
    graph = vecio.load_index(args.index)
    queries = vecio.load_queries(args.queries)
    gt = vecio.load_ground_truth(args.gt)
    if queries.d != ds.d:
        raise ValueError(f"queries have d={queries.d} but dataset has d={ds.d}")
    if graph.n != ds.n:
        raise ValueError(f"index covers n={graph.n} points but dataset has n={ds.n}")
    if gt.m != queries.m:
        raise ValueError(f"ground truth covers m={gt.m} queries but workload has m={queries.m}")
    if gt.k < args.k:
        raise ValueError(f"ground truth k={gt.k} is smaller than requested k={args.k}")
    rows = bench.run_search_sweep(
        ds, graph, queries, gt,
        pool_sizes=args.pool, k=args.k, entry_count=args.entries, seed=args.seed,
    )
    meta = {
        "tool": f"dpgraph {__version__}",
        "index": f"{args.index} kind={graph.kind} param={graph.param}",
        "data": f"{args.data} n={ds.n} d={ds.d}",
        "queries": f"{args.queries} m={queries.m}",
        "k": args.k,
        "entries": args.entries,
        "seed": args.seed,
    }
    bench.write_sweep_csv(args.out, rows, meta)
    for row in rows:
        print(
            f"L={row.pool_size} recall={row.mean_recall:.4f} "
            f"pct_accessed={row.pct_points_accessed:.3f} hops={row.mean_hops:.1f}"
        )
    print(f"wrote {len(rows)} rows -> {args.out}")
    return 0


def _cmd_hardness(args) -> int:
    ds = vecio.load_dataset(args.data)
    queries = vecio.load_queries(args.queries)
    if queries.d != ds.d:
        raise ValueError(f"queries have d={queries.d} but dataset has d={ds.d}")
    report = hardness.hardness_report(
        ds, queries, k=args.k, lid_neighbors=args.lid_neighbors, seed=args.seed
    )
    lines = [
        f"# dpgraph {__version__} hardness",
        f"# data={args.data} n={ds.n} d={ds.d}",
        f"# queries={args.queries} m={report.num_queries}",
        f"# seed={args.seed}",
        "rc,rc_k,k,lid,lid_neighbors,mean_sample_size,rc_excluded,lid_excluded",
        f"{report.rc:.6g},{report.rc_k:.6g},{report.k},{report.lid:.6g},"
        f"{report.lid_neighbors},{report.mean_sample_size},"
        f"{report.rc_excluded},{report.lid_excluded}",
    ]
    with open(args.out, "w") as fh:
        fh.write("\n".join(lines) + "\n")
    print(f"rc={report.rc:.6g} rc_k={report.rc_k:.6g} lid={report.lid:.6g} -> {args.out}")
    return 0


def _cmd_minhops(args) -> int:
    graph = vecio.load_index(args.index)
    gt = vecio.load_ground_truth(args.gt)
    if gt.ids.size and int(gt.ids.max()) >= graph.n:
        raise ValueError(
            f"ground truth ids reach {int(gt.ids.max())} but index has n={graph.n}"
        )
    per_level: dict[int, float] = {}
    inf_total = 0.0
    for row in gt.ids:
        hist, unreachable = hardness.min_hops_histogram(graph, row)
        for level, frac in hist.items():
            per_level[level] = per_level.get(level, 0.0) + frac
        inf_total += unreachable
    m = gt.m
    lines = [
        f"# dpgraph {__version__} minhops",
        f"# index={args.index} kind={graph.kind} param={graph.param} n={graph.n}",
        f"# gt={args.gt} m={m} k={gt.k}",
        "hops,fraction",
    ]
    for level in sorted(per_level):
        lines.append(f"{level},{per_level[level] / m:.6g}")
    lines.append(f"inf,{inf_total / m:.6g}")
    with open(args.out, "w") as fh:
        fh.write("\n".join(lines) + "\n")
    print(f"mean unreachable fraction {inf_total / m:.6g} over {m} queries -> {args.out}")
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except FormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def entry_point() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry_point()
