"""Measurement harness: pool-size sweeps and their CSV serialization.

A sweep runs the same query set through one index at several pool sizes
and aggregates per-size cost and quality numbers.  The CSV schema is
stable: columns L, k, mean_recall, speedup, mean_N, pct_points_accessed,
mean_hops, all floating-point values with 6 significant digits, preceded
by '#' comment lines recording provenance (seed included).  Speedup is
measured against the brute-force baseline time stored with the ground
truth; at small scale it is noisy, so pct_points_accessed (the share of
the dataset touched per query) is the robust cost measure alongside it.
Timed sections run on one thread.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .data import DenseDataset, as_dataset, as_queries
from .exact import GroundTruth
from .graph import NeighborGraph
from .search import SearchParams, search_queries

CSV_COLUMNS = ("L", "k", "mean_recall", "speedup", "mean_N", "pct_points_accessed", "mean_hops")


@dataclass(frozen=True)
class SweepRow:
    """Aggregated measurements for one pool size."""

    pool_size: int
    k: int
    mean_recall: float
    speedup: float
    mean_n: float
    pct_points_accessed: float
    mean_hops: float


def run_search_sweep(
    dataset: DenseDataset,
    graph: NeighborGraph,
    queries,
    gt: GroundTruth,
    pool_sizes,
    k: int = 20,
    entry_count: int = 10,
    seed: int = 42,
) -> list[SweepRow]:
    """Search all queries once per pool size and aggregate the stats."""
    ds = as_dataset(dataset)
    qs = as_queries(queries, ds.d)
    sizes = sorted({int(s) for s in pool_sizes})
    if not sizes:
        raise ValueError("at least one pool size is required")
    # One untimed query warms the compiled search path so the first timed
    # row does not absorb dispatch overhead.
    warm = SearchParams(k=k, pool_size=sizes[0], entry_count=entry_count, seed=seed)
    search_queries(ds, graph, qs.data[:1], warm)
    rows = []
    for pool in sizes:
        params = SearchParams(k=k, pool_size=pool, entry_count=entry_count, seed=seed)
        _, _, stats = search_queries(ds, graph, qs, params, truth=gt)
        mean_recall = float(np.mean([s.recall for s in stats]))
        mean_n = float(np.mean([s.distance_computations for s in stats]))
        mean_time = float(np.mean([s.wall_time for s in stats]))
        rows.append(
            SweepRow(
                pool_size=pool,
                k=k,
                mean_recall=mean_recall,
                speedup=gt.baseline_time / max(mean_time, 1e-12),
                mean_n=mean_n,
                pct_points_accessed=100.0 * mean_n / ds.n,
                mean_hops=float(np.mean([s.hops for s in stats])),
            )
        )
    return rows


def format_sweep_csv(rows, meta: dict | None = None) -> str:
    """Render sweep rows as CSV text with provenance comment headers."""
    lines = []
    for key, value in (meta or {}).items():
        lines.append(f"# {key}={value}")
    lines.append(",".join(CSV_COLUMNS))
    for r in rows:
        lines.append(
            f"{r.pool_size},{r.k},{r.mean_recall:.6g},{r.speedup:.6g},"
            f"{r.mean_n:.6g},{r.pct_points_accessed:.6g},{r.mean_hops:.6g}"
        )
    return "\n".join(lines) + "\n"


def write_sweep_csv(path, rows, meta: dict | None = None) -> None:
    with open(path, "w") as fh:
        fh.write(format_sweep_csv(rows, meta))
