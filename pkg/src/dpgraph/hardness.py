"""Query hardness measures: relative contrast, local intrinsic
dimensionality, and minimum-hop reachability.

Relative contrast compares the mean distance from queries to the dataset
with the mean nearest-neighbor distance; values near 1 mean the nearest
neighbor barely stands out from a random point.  LID is estimated from
each query's exact nearest-neighbor distance profile by maximum
likelihood.  The minimum-hop histogram measures, for one query's true
k-NN set, how many forward hops each dataset point needs to reach that
set; mass at infinity means no path exists at all.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .data import DenseDataset, as_dataset, as_queries
from .graph import NeighborGraph

# Above this dataset size, mean distances use a fixed-size random sample.
MEAN_SAMPLE_CAP = 100_000

# Rows per block in streaming distance scans.
_SCAN_BLOCK = 65_536

# Fewer neighbors than this makes the LID estimator too noisy to report.
_MIN_LID_NEIGHBORS = 10


@dataclass(frozen=True)
class HardnessReport:
    """Bundle of hardness measures for one dataset / query set pair.

    mean_sample_size is the number of points the mean distance was
    averaged over; rc_excluded and lid_excluded count queries dropped for
    zero nearest or zero profile distances.
    """

    rc: float
    rc_k: float
    k: int
    lid: float
    lid_neighbors: int
    num_queries: int
    mean_sample_size: int
    rc_excluded: int
    lid_excluded: int


def _query_block_dists(q64: np.ndarray, qsq: np.ndarray, block32: np.ndarray) -> np.ndarray:
    """Float64 query-to-block distance matrix via shared inner products."""
    block = block32.astype(np.float64)
    bsq = np.einsum("ij,ij->i", block, block)
    d2 = qsq[:, None] + bsq[None, :] - 2.0 * (q64 @ block.T)
    np.maximum(d2, 0.0, out=d2)
    return np.sqrt(d2, out=d2)


def _distance_profile(
    dataset: DenseDataset, queries, k: int, seed: int
) -> tuple[np.ndarray, np.ndarray, np.ndarray, int]:
    """Per query: nearest distance, k-th distance, mean distance.

    The mean is exact for datasets up to MEAN_SAMPLE_CAP points and
    otherwise estimated on a seeded random sample of that size; the
    nearest and k-th distances always use the full dataset.
    """
    ds = as_dataset(dataset)
    qs = as_queries(queries, ds.d)
    n = ds.n
    if not 1 <= k <= n:
        raise ValueError(f"k must be in [1, {n}], got {k}")
    if n > MEAN_SAMPLE_CAP:
        rng = np.random.default_rng(seed)
        sample_ids = np.sort(rng.choice(n, size=MEAN_SAMPLE_CAP, replace=False))
    else:
        sample_ids = None
    q64 = qs.data.astype(np.float64)
    qsq = np.einsum("ij,ij->i", q64, q64)
    sums = np.zeros(qs.m)
    count = 0
    top = np.full((qs.m, k), np.inf)
    for lo in range(0, n, _SCAN_BLOCK):
        hi = min(lo + _SCAN_BLOCK, n)
        dist = _query_block_dists(q64, qsq, ds.data[lo:hi])
        if sample_ids is None:
            sums += dist.sum(axis=1)
            count += hi - lo
        else:
            inside = sample_ids[(sample_ids >= lo) & (sample_ids < hi)] - lo
            if inside.size:
                sums += dist[:, inside].sum(axis=1)
                count += inside.size
        merged = np.concatenate([top, dist], axis=1)
        top = np.partition(merged, k - 1, axis=1)[:, :k]
    top.sort(axis=1)
    return top[:, 0], top[:, k - 1], sums / count, count


def _rc_scan(dataset, queries, k: int, seed: int) -> tuple[float, float, int, int]:
    d_min, d_kth, d_mean, sample = _distance_profile(dataset, queries, k, seed)
    ok = d_min > 0.0
    excluded = int((~ok).sum())
    if excluded:
        warnings.warn(
            f"excluded {excluded} queries with zero nearest distance from relative contrast",
            stacklevel=3,
        )
    if not ok.any():
        raise ValueError("every query coincides with a dataset point; rc undefined")
    rc = float(d_mean[ok].mean() / d_min[ok].mean())
    ok_k = d_kth > 0.0
    rc_k = float(d_mean[ok_k].mean() / d_kth[ok_k].mean()) if ok_k.any() else float("inf")
    return rc, rc_k, excluded, sample


def relative_contrast(
    dataset: DenseDataset, queries, k: int = 20, seed: int = 42
) -> tuple[float, float]:
    """Relative contrast of a workload: (rc, rc_k).

    rc is mean(D_mean) / mean(D_min) over the queries and rc_k the same
    with the mean k-th neighbor distance in the denominator.  Queries
    that coincide with a dataset point (nearest distance zero) are
    excluded, with a warning carrying the exclusion count.  Both values
    are translation invariant and unchanged by uniform scaling.
    """
    rc, rc_k, _, _ = _rc_scan(dataset, queries, k, seed)
    return rc, rc_k


def _knn_radii(dataset: DenseDataset, queries, w: int) -> np.ndarray:
    """(m, w) float64 nearest-neighbor distances per query, ascending."""
    ds = as_dataset(dataset)
    qs = as_queries(queries, ds.d)
    if not 1 <= w <= ds.n:
        raise ValueError(f"neighbor count must be in [1, {ds.n}], got {w}")
    q64 = qs.data.astype(np.float64)
    qsq = np.einsum("ij,ij->i", q64, q64)
    top = np.full((qs.m, w), np.inf)
    for lo in range(0, ds.n, _SCAN_BLOCK):
        hi = min(lo + _SCAN_BLOCK, ds.n)
        dist = _query_block_dists(q64, qsq, ds.data[lo:hi])
        merged = np.concatenate([top, dist], axis=1)
        top = np.partition(merged, w - 1, axis=1)[:, :w]
    top.sort(axis=1)
    return top


def _lid_from_radii(radii: np.ndarray) -> tuple[float, int]:
    """(mean estimate, dropped query count) from an (m, w) radius table.

    Queries containing a zero radius are dropped.  A profile whose radii
    are all equal makes the estimator diverge; such queries contribute
    +inf, which propagates to the reported mean.
    """
    w = radii.shape[1]
    dropped = 0
    vals = []
    for row in radii:
        if row[0] <= 0.0:
            dropped += 1
            continue
        denom = np.log(row / row[-1]).sum() / w
        vals.append(np.inf if denom == 0.0 else -1.0 / denom)
    if not vals:
        raise ValueError("no query left after dropping zero-distance profiles")
    return float(np.mean(vals)), dropped


def lid_estimate(dataset: DenseDataset, queries, neighbors_per_query: int = 100) -> float:
    """Maximum-likelihood local intrinsic dimensionality, query-averaged.

    Per query, with r_1 <= ... <= r_w its w = neighbors_per_query exact
    nearest-neighbor distances, the estimate is
    -1 / ((1 / w) * sum(log(r_i / r_w))).  Queries with a zero radius are
    dropped with a warning carrying the count; an all-equal profile
    diverges and turns the reported average into +inf, also with a
    warning.
    """
    if neighbors_per_query < _MIN_LID_NEIGHBORS:
        raise ValueError(
            f"neighbors_per_query must be at least {_MIN_LID_NEIGHBORS}, "
            f"got {neighbors_per_query}"
        )
    radii = _knn_radii(dataset, queries, neighbors_per_query)
    lid, dropped = _lid_from_radii(radii)
    if dropped:
        warnings.warn(
            f"dropped {dropped} queries with zero neighbor distances from the LID estimate",
            stacklevel=2,
        )
    if not np.isfinite(lid):
        warnings.warn(
            "a query profile had all radii equal; the LID estimate diverges to +inf",
            stacklevel=2,
        )
    return lid


def min_hops_histogram(graph: NeighborGraph, truth_ids) -> tuple[dict[int, float], float]:
    """Hop distribution toward one query's true neighbor set.

    Runs a breadth-first search from the id set over reversed edges, so a
    point's hop count is the length of the shortest forward path from it
    into the set.  Returns (histogram, unreachable) where histogram maps
    hop count to the fraction of dataset points at that hop (the set
    itself sits at hop 0) and unreachable is the fraction with no path at
    all; all fractions together sum to 1.
    """
    ids = np.unique(np.asarray(truth_ids, dtype=np.int64).ravel())
    if ids.size == 0:
        raise ValueError("empty neighbor id set")
    if ids.min() < 0 or ids.max() >= graph.n:
        raise ValueError("neighbor id out of range")
    rev_indptr, rev_ids = graph.reverse_csr()
    hop = np.full(graph.n, -1, dtype=np.int64)
    hop[ids] = 0
    frontier = ids
    level = 0
    while frontier.size:
        level += 1
        starts = rev_indptr[frontier]
        counts = rev_indptr[frontier + 1] - starts
        total = int(counts.sum())
        if total == 0:
            break
        base = np.repeat(starts - np.concatenate([[0], np.cumsum(counts[:-1])]), counts)
        flat = rev_ids[base + np.arange(total)]
        cand = np.unique(flat)
        cand = cand[hop[cand] < 0]
        if cand.size == 0:
            break
        hop[cand] = level
        frontier = cand
    reached, freq = np.unique(hop[hop >= 0], return_counts=True)
    hist = {int(a): float(b) / graph.n for a, b in zip(reached, freq)}
    unreachable = float((hop < 0).sum()) / graph.n
    return hist, unreachable


def hardness_report(
    dataset: DenseDataset,
    queries,
    k: int = 20,
    lid_neighbors: int = 100,
    seed: int = 42,
) -> HardnessReport:
    """Relative contrast and LID for a workload in one bundle."""
    ds = as_dataset(dataset)
    qs = as_queries(queries, ds.d)
    rc, rc_k, rc_excluded, sample = _rc_scan(ds, qs, k, seed)
    if lid_neighbors < _MIN_LID_NEIGHBORS:
        raise ValueError(f"lid_neighbors must be at least {_MIN_LID_NEIGHBORS}")
    radii = _knn_radii(ds, qs, lid_neighbors)
    lid, lid_excluded = _lid_from_radii(radii)
    return HardnessReport(
        rc=rc,
        rc_k=rc_k,
        k=k,
        lid=lid,
        lid_neighbors=lid_neighbors,
        num_queries=qs.m,
        mean_sample_size=sample,
        rc_excluded=rc_excluded,
        lid_excluded=lid_excluded,
    )
