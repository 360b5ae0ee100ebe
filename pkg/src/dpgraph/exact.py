"""Brute-force nearest neighbor oracle and ground-truth construction.

The oracle scans all points, quantizes distances to float32 (matching the
rest of the library) and ranks by (distance, id) ascending, so its output
is directly comparable with graph search results.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np

from .data import DenseDataset, QuerySet, as_dataset, as_queries
from .distances import point_distances
from .graph import KNN, Neighbor, NeighborGraph

# Row block for the all-pairs scan used by exact_knn_graph.
_PAIR_BLOCK = 256


def _check_k(k: int, n: int) -> None:
    if not 1 <= k <= n:
        raise ValueError(f"k must be in [1, {n}], got {k}")


def knn_scan(dataset: DenseDataset, query, k: int) -> tuple[np.ndarray, np.ndarray]:
    """Exact k nearest neighbors of one query as (ids, dists) arrays."""
    ds = as_dataset(dataset)
    _check_k(k, ds.n)
    d32 = point_distances(ds.data, query)
    order = np.argsort(d32, kind="stable")[:k]  # stable: ties fall to smaller id
    return order.astype(np.int32), d32[order]


def brute_force_knn(dataset: DenseDataset, query, k: int) -> list[Neighbor]:
    """Exact k nearest neighbors of query, ascending by (distance, id)."""
    ids, dists = knn_scan(dataset, query, k)
    return [Neighbor(int(i), float(d)) for i, d in zip(ids, dists)]


def exact_knn_graph(dataset: DenseDataset, K: int) -> NeighborGraph:
    """Exact K-nearest-neighbor graph by full pairwise scan.

    Quadratic in n; intended as the oracle that approximate builds are
    measured against, not for production use.
    """
    ds = as_dataset(dataset)
    n = ds.n
    if not 1 <= K <= n - 1:
        raise ValueError(f"K must be in [1, n - 1], got K={K} for n={n}")
    data64 = ds.data.astype(np.float64)
    sq = np.einsum("ij,ij->i", data64, data64)
    ids = np.empty((n, K), dtype=np.int32)
    dists = np.empty((n, K), dtype=np.float32)
    for lo in range(0, n, _PAIR_BLOCK):
        hi = min(lo + _PAIR_BLOCK, n)
        block = data64[lo:hi]
        d2 = sq[lo:hi, None] + sq[None, :] - 2.0 * (block @ data64.T)
        np.maximum(d2, 0.0, out=d2)
        d32 = np.sqrt(d2, out=d2).astype(np.float32)
        for r in range(hi - lo):
            row = d32[r]
            order = np.argsort(row, kind="stable")
            keep = order[order != lo + r][:K]
            ids[lo + r] = keep
            dists[lo + r] = row[keep]
    return NeighborGraph.from_uniform(KNN, K, ids, dists)


@dataclass(frozen=True)
class GroundTruth:
    """Exact k-NN ids and distances for a query set, plus scan timing.

    baseline_time is the mean single-threaded seconds per query of the
    brute-force scan, measured warm; it is the denominator of reported
    speedups.
    """

    k: int
    ids: np.ndarray
    dists: np.ndarray
    baseline_time: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "ids", np.ascontiguousarray(self.ids, dtype=np.int32))
        object.__setattr__(self, "dists", np.ascontiguousarray(self.dists, dtype=np.float32))
        if self.ids.ndim != 2 or self.ids.shape != self.dists.shape:
            raise ValueError("ids and dists must be matching 2-d arrays")
        if self.ids.shape[1] != self.k:
            raise ValueError(f"ids have {self.ids.shape[1]} columns, expected k={self.k}")
        if self.baseline_time <= 0.0:
            raise ValueError("baseline_time must be positive")

    @property
    def m(self) -> int:
        return self.ids.shape[0]


def build_ground_truth(dataset: DenseDataset, queries: QuerySet, k: int) -> GroundTruth:
    """Exact k-NN of every query by linear scan, with per-query timing.

    One untimed warm pass precedes the measurement so the reported
    baseline_time reflects a warm cache.
    """
    ds = as_dataset(dataset)
    qs = as_queries(queries, ds.d)
    _check_k(k, ds.n)
    ids = np.empty((qs.m, k), dtype=np.int32)
    dists = np.empty((qs.m, k), dtype=np.float32)
    point_distances(ds.data, qs.data[0])  # warm pass, untimed
    total = 0.0
    for i in range(qs.m):
        t0 = time.perf_counter()
        d32 = point_distances(ds.data, qs.data[i])
        order = np.argsort(d32, kind="stable")[:k]
        total += time.perf_counter() - t0
        ids[i] = order
        dists[i] = d32[order]
    baseline = max(total / qs.m, 1e-12)
    return GroundTruth(k=k, ids=ids, dists=dists, baseline_time=baseline)
