"""Greedy best-first search over a neighbor graph.

The walk keeps a bounded candidate pool of the pool_size closest points
seen so far, sorted ascending by (distance, id).  It seeds the pool with
entry_count random entry points, then repeatedly expands the closest
unexplored pool entry, inserting any unvisited neighbor, until every pool
entry has been explored.  A visited set guarantees each point's distance
to the query is computed at most once, so the reported distance count
never exceeds n.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .data import DenseDataset, as_dataset, as_queries
from .exact import GroundTruth
from .graph import Neighbor, NeighborGraph


@dataclass(frozen=True)
class SearchParams:
    """Query-time knobs.

    k results are returned out of a pool of pool_size candidates; the walk
    starts from entry_count random entries drawn with the given seed.  A
    larger pool trades distance computations for recall.
    """

    k: int = 20
    pool_size: int = 40
    entry_count: int = 10
    seed: int = 42

    def __post_init__(self) -> None:
        if self.k < 1:
            raise ValueError(f"k must be positive, got {self.k}")
        if self.pool_size < self.k:
            raise ValueError(
                f"pool_size must be at least k={self.k}, got {self.pool_size}"
            )
        if self.entry_count < 1:
            raise ValueError(f"entry_count must be positive, got {self.entry_count}")


@dataclass
class SearchStats:
    """Per-query cost accounting.

    distance_computations counts distance evaluations, hops counts pool expansions,
    wall_time is seconds for the walk itself.  recall is filled in when
    ground truth is available.
    """

    distance_computations: int
    hops: int
    wall_time: float
    recall: float | None = None


def _check_graph(dataset: DenseDataset, graph: NeighborGraph) -> None:
    if graph.n != dataset.n:
        raise ValueError(f"graph has {graph.n} nodes but dataset has {dataset.n}")


def _draw_entries(rng: np.random.Generator, n: int, count: int) -> np.ndarray:
    if count > n:
        raise ValueError(f"entry_count={count} exceeds dataset size {n}")
    return rng.choice(n, size=count, replace=False).astype(np.int32)


def greedy_search(
    dataset: DenseDataset,
    graph: NeighborGraph,
    query,
    params: SearchParams | None = None,
    entries: np.ndarray | None = None,
) -> tuple[list[Neighbor], SearchStats]:
    """Search one query; returns (results, stats).

    Results are the k closest pool survivors, ascending by (dist, id).
    entries overrides the random entry draw, mainly for tests; by default
    entry points come from a fresh generator seeded with params.seed, so
    identical calls return identical results.  Raises ValueError when the
    pool holds fewer than k points after termination, which can only
    happen when the reachable part of the graph is smaller than k.
    """
    ds = as_dataset(dataset)
    p = params if params is not None else SearchParams()
    _check_graph(ds, graph)
    _check_pool(p, ds.n)
    q = as_queries(query, ds.d).data[0]
    if entries is None:
        entries = _draw_entries(np.random.default_rng(p.seed), ds.n, p.entry_count)
    else:
        entries = np.ascontiguousarray(entries, dtype=np.int32)
        if entries.size < 1 or entries.min() < 0 or entries.max() >= ds.n:
            raise ValueError("entries must be valid node ids")
    t0 = time.perf_counter()
    ids, dists, n_computed, hops, found = _kernels.greedy_search(
        ds.data, graph.indptr, graph.neighbor_ids, q, entries, p.pool_size, p.k
    )
    wall = time.perf_counter() - t0
    if found < p.k:
        raise ValueError(
            f"search pool holds only {found} points, fewer than k={p.k}; "
            "the graph region reachable from the entries is too small"
        )
    results = [Neighbor(int(i), float(d)) for i, d in zip(ids, dists)]
    return results, SearchStats(distance_computations=int(n_computed), hops=int(hops), wall_time=wall)


def _check_pool(p: SearchParams, n: int) -> None:
    if p.pool_size > n:
        raise ValueError(f"pool_size={p.pool_size} exceeds dataset size {n}")


def search_queries(
    dataset: DenseDataset,
    graph: NeighborGraph,
    queries,
    params: SearchParams | None = None,
    truth: GroundTruth | None = None,
) -> tuple[np.ndarray, np.ndarray, list[SearchStats]]:
    """Search a whole query set; returns (ids, dists, per-query stats).

    Entry points for all queries are drawn from one generator seeded with
    params.seed, so the batch is reproducible end to end.  When truth is
    given, each query's recall is recorded on its stats entry.
    """
    ds = as_dataset(dataset)
    p = params if params is not None else SearchParams()
    _check_graph(ds, graph)
    _check_pool(p, ds.n)
    qs = as_queries(queries, ds.d)
    if truth is not None:
        if truth.m != qs.m:
            raise ValueError(f"ground truth covers {truth.m} queries, got {qs.m}")
        if truth.k < p.k:
            raise ValueError(f"ground truth has k={truth.k}, need at least {p.k}")
    rng = np.random.default_rng(p.seed)
    out_ids = np.empty((qs.m, p.k), dtype=np.int32)
    out_dists = np.empty((qs.m, p.k), dtype=np.float32)
    stats: list[SearchStats] = []
    for i in range(qs.m):
        entries = _draw_entries(rng, ds.n, p.entry_count)
        t0 = time.perf_counter()
        ids, dists, n_computed, hops, found = _kernels.greedy_search(
            ds.data, graph.indptr, graph.neighbor_ids, qs.data[i], entries, p.pool_size, p.k
        )
        wall = time.perf_counter() - t0
        if found < p.k:
            raise ValueError(
                f"search pool for query {i} holds only {found} points, fewer than k={p.k}"
            )
        out_ids[i] = ids
        out_dists[i] = dists
        st = SearchStats(distance_computations=int(n_computed), hops=int(hops), wall_time=wall)
        if truth is not None:
            st.recall = recall(ids, truth.ids[i][: p.k])
        stats.append(st)
    return out_ids, out_dists, stats


def recall(result_ids, truth_ids) -> float:
    """Fraction of the true neighbor ids present in the returned ids."""
    res = np.asarray(result_ids).ravel()
    tru = np.asarray(truth_ids).ravel()
    if res.shape[0] != tru.shape[0]:
        raise ValueError(f"length mismatch: {res.shape[0]} results vs {tru.shape[0]} truth ids")
    if tru.shape[0] == 0:
        raise ValueError("empty truth set")
    return np.intersect1d(res, tru, assume_unique=True).size / tru.shape[0]
