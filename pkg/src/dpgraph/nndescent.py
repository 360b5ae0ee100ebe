"""Approximate K-nearest-neighbor graph construction by NN-descent.

The builder starts every node with K random distinct neighbors and then
repeatedly applies local joins: for each node, newly added neighbors are
compared against that node's other new and old neighbors (forward and
reverse), and any pair that improves either side's list is inserted.  Four
standard refinements keep the cost down: the local join itself, new/old
incremental flags so settled pairs are not recompared, candidate sampling
at rate sample_rate, and early termination once an iteration changes fewer
than termination * K * n list entries.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .data import DenseDataset, as_dataset
from .graph import KNN, NeighborGraph


@dataclass(frozen=True)
class NnDescentParams:
    """Knobs for the NN-descent build.

    n_neighbors is K, the out-degree of the produced graph.  sample_rate
    is the fraction of new neighbors joined per round, termination the
    per-entry update fraction under which the build stops, and max_iters a
    hard iteration cap.
    """

    n_neighbors: int = 40
    sample_rate: float = 0.5
    termination: float = 0.002
    max_iters: int = 30
    seed: int = 42

    def __post_init__(self) -> None:
        if self.n_neighbors < 1:
            raise ValueError(f"n_neighbors must be positive, got {self.n_neighbors}")
        if not 0.0 < self.sample_rate <= 1.0:
            raise ValueError(f"sample_rate must be in (0, 1], got {self.sample_rate}")
        if self.termination < 0.0:
            raise ValueError(f"termination must be non-negative, got {self.termination}")
        if self.max_iters < 1:
            raise ValueError(f"max_iters must be positive, got {self.max_iters}")


def _sample_distinct_rows(rng: np.random.Generator, n: int, K: int) -> np.ndarray:
    """(n, K) matrix whose rows are K distinct draws from [0, n - 2]."""
    if n - 1 <= 2 * K:
        # Dense regime: permute the full candidate range per row.
        base = np.tile(np.arange(n - 1), (n, 1))
        return rng.permuted(base, axis=1)[:, :K].astype(np.int64)
    cand = rng.integers(0, n - 1, size=(n, K))
    while True:
        srt = np.sort(cand, axis=1)
        bad = np.flatnonzero((srt[:, 1:] == srt[:, :-1]).any(axis=1))
        if bad.size == 0:
            return cand
        cand[bad] = rng.integers(0, n - 1, size=(bad.size, K))


def _sort_rows(ids: np.ndarray, dists: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Sort each row ascending by (dist, id) via two stable passes."""
    o1 = np.argsort(ids, axis=1, kind="stable")
    ids = np.take_along_axis(ids, o1, axis=1)
    dists = np.take_along_axis(dists, o1, axis=1)
    o2 = np.argsort(dists, axis=1, kind="stable")
    return np.take_along_axis(ids, o2, axis=1), np.take_along_axis(dists, o2, axis=1)


def _random_init(data: np.ndarray, K: int, rng: np.random.Generator):
    n = data.shape[0]
    cand = _sample_distinct_rows(rng, n, K)
    cand += cand >= np.arange(n)[:, None]  # skip self
    left = np.repeat(np.arange(n, dtype=np.int64), K)
    d = _kernels.pair_distances(data, left, cand.ravel()).reshape(n, K)
    ids, dists = _sort_rows(cand.astype(np.int32), d)
    flags = np.ones((n, K), dtype=np.uint8)
    return np.ascontiguousarray(ids), np.ascontiguousarray(dists), flags


def _reverse_sample(lists: np.ndarray, s: int, rng: np.random.Generator, n: int) -> np.ndarray:
    """For each target node, up to s random sources pointing at it."""
    width = lists.shape[1]
    src = np.repeat(np.arange(n, dtype=np.int64), width)
    tgt = lists.ravel()
    keep = tgt >= 0
    src, tgt = src[keep], tgt[keep]
    keys = rng.random(tgt.shape[0])
    order = np.lexsort((keys, tgt))
    tgt, src = tgt[order], src[order]
    counts = np.bincount(tgt, minlength=n)
    starts = np.zeros(n, dtype=np.int64)
    np.cumsum(counts[:-1], out=starts[1:])
    rank = np.arange(tgt.shape[0]) - starts[tgt]
    sel = rank < s
    out = np.full((n, s), -1, dtype=np.int32)
    out[tgt[sel], rank[sel]] = src[sel]
    return out


def _drop_row_duplicates(lists: np.ndarray) -> np.ndarray:
    """Sort rows and blank repeated ids with -1 (order is irrelevant)."""
    lists = np.sort(lists, axis=1)
    dup = lists[:, 1:] == lists[:, :-1]
    dup &= lists[:, 1:] >= 0
    lists[:, 1:][dup] = -1
    return lists


def _join_lists(ids, flags, s, rng, n):
    """Assemble per-node new and old candidate lists for one join round."""
    flagged = flags == 1
    keys = np.where(flagged, rng.random(flags.shape), np.inf)
    take = min(s, ids.shape[1])
    sel = np.argpartition(keys, take - 1, axis=1)[:, :take]
    sel_ok = np.take_along_axis(flagged, sel, axis=1)
    fwd_new = np.where(sel_ok, np.take_along_axis(ids, sel, axis=1), -1).astype(np.int32)
    fwd_old = np.where(flagged, -1, ids).astype(np.int32)
    # Sampled entries stop being new from the next round on.
    cleared = np.take_along_axis(flags, sel, axis=1)
    cleared[sel_ok] = 0
    np.put_along_axis(flags, sel, cleared, axis=1)
    rev_new = _reverse_sample(fwd_new, s, rng, n)
    rev_old = _reverse_sample(fwd_old, s, rng, n)
    new_lists = _drop_row_duplicates(np.concatenate([fwd_new, rev_new], axis=1))
    old_lists = _drop_row_duplicates(np.concatenate([fwd_old, rev_old], axis=1))
    return new_lists, old_lists


def build_knn_graph(dataset: DenseDataset, params: NnDescentParams | None = None) -> NeighborGraph:
    """Build an approximate K-NN graph with NN-descent.

    Requires n >= K + 1 so every node can have K distinct neighbors.  With
    a fixed seed the build is deterministic, including across processes.
    """
    ds = as_dataset(dataset)
    p = params if params is not None else NnDescentParams()
    n, K = ds.n, p.n_neighbors
    if n < K + 1:
        raise ValueError(f"need at least K + 1 = {K + 1} points, got {n}")
    rng = np.random.default_rng(p.seed)
    ids, dists, flags = _random_init(ds.data, K, rng)
    s = max(1, int(p.sample_rate * K))
    threshold = p.termination * K * n
    for _ in range(p.max_iters):
        new_lists, old_lists = _join_lists(ids, flags, s, rng, n)
        updates = _kernels.local_join(ds.data, ids, dists, flags, new_lists, old_lists)
        if updates < threshold:
            break
    return NeighborGraph.from_uniform(KNN, K, ids, dists)


def graph_recall(approx: NeighborGraph, exact: NeighborGraph) -> float:
    """Mean per-node overlap between two uniform-degree neighbor graphs."""
    if approx.n != exact.n:
        raise ValueError(f"node counts differ: {approx.n} vs {exact.n}")
    hits = 0
    total = 0
    for u in range(approx.n):
        a, _ = approx.neighbors(u)
        b, _ = exact.neighbors(u)
        if a.shape[0] != b.shape[0]:
            raise ValueError(f"degree mismatch at node {u}: {a.shape[0]} vs {b.shape[0]}")
        hits += np.intersect1d(a, b, assume_unique=True).size
        total += a.shape[0]
    return hits / total
