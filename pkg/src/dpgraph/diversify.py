"""Neighbor diversification and the diversified proximity graph build.

Dense K-NN graphs waste edges on neighbors that all lie in the same
direction.  Diversification keeps, per node, a subset of kappa neighbors
that cover directions more evenly; adding every kept edge's reverse then
makes the graph symmetric so a greedy walk can escape regions the forward
edges alone would trap it in.  Two selection strategies are provided:

angular   Greedy direction spreading.  Start from the nearest neighbor and
          repeatedly add the candidate whose average angle (subtended at
          the owning node) to the already-selected set is largest.

counting  For each candidate v, count how many other list members sit
          closer to v than the owning node does; keep the kappa
          candidates with the lowest counts.  This is the cheaper
          strategy and the default.

Both break ties by smaller distance, then smaller id.  The standard recipe
diversifies a K = 2 * kappa NN-descent graph.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .data import DenseDataset, as_dataset
from .errors import GraphStructureError
from .graph import DPG, KNN, NeighborGraph
from .nndescent import NnDescentParams, build_knn_graph

_METHODS = ("counting", "angular")

# Nodes per block in the vectorized selection scans.
_NODE_BLOCK = 512


@dataclass(frozen=True)
class DpgParams:
    """Diversification settings.

    kappa is the per-node selection size; the final graph holds at most
    2 * kappa * n directed edges.  method picks the selection strategy.
    angular_spread only affects the angular strategy: True (default)
    spreads directions by maximizing the average angle at each step, False
    inverts the objective, which clusters directions instead and is only
    useful for side-by-side comparisons.
    """

    kappa: int = 20
    method: str = "counting"
    angular_spread: bool = True

    def __post_init__(self) -> None:
        if self.kappa < 1:
            raise ValueError(f"kappa must be positive, got {self.kappa}")
        if self.method not in _METHODS:
            raise ValueError(f"method must be one of {_METHODS}, got {self.method!r}")


def _uniform_rows(graph: NeighborGraph) -> tuple[np.ndarray, np.ndarray]:
    """Adjacency of a uniform-degree graph as dense (n, K) matrices."""
    degrees = np.diff(graph.indptr)
    K = int(degrees[0]) if degrees.size else 0
    if K < 1 or np.any(degrees != K):
        raise GraphStructureError("diversification needs a uniform-degree source graph")
    ids = graph.neighbor_ids.reshape(graph.n, K)
    dists = graph.neighbor_dists.reshape(graph.n, K)
    return ids, dists


def diversify_counting(dataset: DenseDataset, graph: NeighborGraph, kappa: int) -> np.ndarray:
    """Occlusion-count selection; returns (n, kappa) chosen neighbor ids.

    A candidate v is occluded when another list member u is strictly
    closer to v than the owning node p is (dist(v, u) < dist(v, p)); the
    kappa least-occluded candidates survive.
    """
    ds = as_dataset(dataset)
    ids, dists = _uniform_rows(graph)
    K = ids.shape[1]
    _check_kappa(kappa, K)
    data64 = ds.data.astype(np.float64)
    out = np.empty((graph.n, kappa), dtype=np.int32)
    for lo in range(0, graph.n, _NODE_BLOCK):
        hi = min(lo + _NODE_BLOCK, graph.n)
        block_ids = ids[lo:hi]
        cand = data64[block_ids]  # (b, K, d)
        own = data64[lo:hi]  # (b, d)
        # Squared distances from shared inner products so both sides of
        # the comparison are computed with identical arithmetic.
        cnorm = np.einsum("bkd,bkd->bk", cand, cand)
        gram = np.einsum("bkd,bld->bkl", cand, cand)
        cand_sq = cnorm[:, :, None] + cnorm[:, None, :] - 2.0 * gram
        onorm = np.einsum("bd,bd->b", own, own)
        oprod = np.einsum("bkd,bd->bk", cand, own)
        own_sq = cnorm + onorm[:, None] - 2.0 * oprod
        occluded = cand_sq < own_sq[:, :, None]
        occluded[:, np.arange(K), np.arange(K)] = False
        counts = occluded.sum(axis=2)
        # Rows are already (dist, id) ascending, so one stable pass on the
        # counts realizes the (count, dist, id) tie-break.
        order = np.argsort(counts, axis=1, kind="stable")[:, :kappa]
        out[lo:hi] = np.take_along_axis(block_ids, order, axis=1)
    return out


def diversify_angular(
    dataset: DenseDataset, graph: NeighborGraph, kappa: int, *, spread: bool = True
) -> np.ndarray:
    """Greedy angular selection; returns (n, kappa) chosen neighbor ids.

    The selection starts with the nearest neighbor; each later step scores
    every remaining candidate by its average angle, at the owning node, to
    the current selection, and takes the best score (largest when spread
    is True).  Candidates that coincide with the owning node contribute a
    zero angle.
    """
    ds = as_dataset(dataset)
    ids, dists = _uniform_rows(graph)
    K = ids.shape[1]
    _check_kappa(kappa, K)
    data64 = ds.data.astype(np.float64)
    out = np.empty((graph.n, kappa), dtype=np.int32)
    sign = 1.0 if spread else -1.0
    for lo in range(0, graph.n, _NODE_BLOCK):
        hi = min(lo + _NODE_BLOCK, graph.n)
        b = hi - lo
        block_ids = ids[lo:hi]
        vec = data64[block_ids] - data64[lo:hi, None, :]  # (b, K, d)
        norms = np.sqrt(np.einsum("bkd,bkd->bk", vec, vec))
        ok = norms > 0.0
        unit = np.where(ok[:, :, None], vec / np.where(ok, norms, 1.0)[:, :, None], 0.0)
        cosine = np.clip(np.einsum("bkd,bld->bkl", unit, unit), -1.0, 1.0)
        angles = np.arccos(cosine)
        # A zero-length difference has no direction; score those pairs 0.
        pair_ok = ok[:, :, None] & ok[:, None, :]
        angles = np.where(pair_ok, angles, 0.0)
        chosen = np.zeros((b, kappa), dtype=np.int64)
        taken = np.zeros((b, K), dtype=bool)
        taken[:, 0] = True  # the nearest neighbor seeds the selection
        score = np.zeros((b, K))
        rows = np.arange(b)
        for step in range(1, kappa):
            prev = chosen[:, step - 1][:, None, None]
            score += np.take_along_axis(angles, prev, axis=2)[:, :, 0]
            masked = np.where(taken, -np.inf, sign * score)
            # argmax takes the first best column; columns are (dist, id)
            # ascending, which is exactly the tie-break wanted.
            best = np.argmax(masked, axis=1)
            chosen[:, step] = best
            taken[rows, best] = True
        out[lo:hi] = np.take_along_axis(block_ids, chosen, axis=1)
    return out


def _check_kappa(kappa: int, K: int) -> None:
    if not 1 <= kappa <= K:
        raise ValueError(f"kappa must be in [1, K={K}], got {kappa}")


def add_reverse_edges(selected: np.ndarray, graph: NeighborGraph, kappa: int) -> NeighborGraph:
    """Symmetrize per-node selections into the final diversified graph.

    selected holds each node's kappa chosen ids, which must come from that
    node's list in the source graph (their cached distances are reused).
    The result contains every selected edge and its reverse, deduplicated,
    each list sorted ascending by (dist, id).
    """
    ids, dists = _uniform_rows(graph)
    n = graph.n
    selected = np.ascontiguousarray(selected, dtype=np.int32)
    if selected.shape != (n, kappa):
        raise ValueError(f"selected must have shape ({n}, {kappa}), got {selected.shape}")
    match = ids[:, None, :] == selected[:, :, None]  # (n, kappa, K)
    found = match.any(axis=2)
    if not found.all():
        u = int(np.argwhere(~found)[0][0])
        raise GraphStructureError(f"selection at node {u} is not in its source list")
    sel_dists = np.take_along_axis(dists, match.argmax(axis=2), axis=1)
    src = np.repeat(np.arange(n, dtype=np.int64), kappa)
    dst = selected.ravel().astype(np.int64)
    w = sel_dists.ravel()
    # Forward plus reverse, then drop duplicate (src, dst) pairs.
    all_src = np.concatenate([src, dst])
    all_dst = np.concatenate([dst, src])
    all_w = np.concatenate([w, w])
    order = np.lexsort((all_w, all_dst, all_src))
    all_src, all_dst, all_w = all_src[order], all_dst[order], all_w[order]
    first = np.ones(all_src.shape[0], dtype=bool)
    first[1:] = (all_src[1:] != all_src[:-1]) | (all_dst[1:] != all_dst[:-1])
    all_src, all_dst, all_w = all_src[first], all_dst[first], all_w[first]
    # Within each source, order by (dist, id).
    order = np.lexsort((all_dst, all_w, all_src))
    all_src, all_dst, all_w = all_src[order], all_dst[order], all_w[order]
    counts = np.bincount(all_src, minlength=n)
    indptr = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(counts, out=indptr[1:])
    return NeighborGraph(DPG, kappa, indptr, all_dst.astype(np.int32), all_w.astype(np.float32))


def build_dpg_from_knn(
    dataset: DenseDataset, graph: NeighborGraph, params: DpgParams | None = None
) -> NeighborGraph:
    """Diversify an existing uniform K-NN graph and symmetrize it."""
    p = params if params is not None else DpgParams()
    if p.method == "counting":
        selected = diversify_counting(dataset, graph, p.kappa)
    else:
        selected = diversify_angular(dataset, graph, p.kappa, spread=p.angular_spread)
    return add_reverse_edges(selected, graph, p.kappa)


def build_dpg(
    dataset: DenseDataset,
    params: DpgParams | None = None,
    nn_params: NnDescentParams | None = None,
) -> NeighborGraph:
    """Full diversified-graph build from raw points.

    Unless nn_params overrides it, the source graph is an NN-descent build
    with K = 2 * kappa.
    """
    p = params if params is not None else DpgParams()
    if nn_params is None:
        nn_params = NnDescentParams(n_neighbors=2 * p.kappa)
    knn = build_knn_graph(dataset, nn_params)
    return build_dpg_from_knn(dataset, knn, p)
