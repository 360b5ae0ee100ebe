"""Neighbor graph container with structural validation.

A NeighborGraph stores directed adjacency lists in CSR form.  Two kinds
exist: "knn" graphs, where every node has exactly min(K, n - 1) out-edges,
and "dpg" graphs, produced by diversification plus reverse-edge insertion,
which are symmetric and hold at most 2 * kappa * n directed edges.  Within
each adjacency list entries are sorted ascending by (distance, id) and
distances are float32, cached at build time.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import GraphStructureError

KNN = "knn"
DPG = "dpg"
_KINDS = (KNN, DPG)


@dataclass(frozen=True)
class Neighbor:
    """One adjacency or result entry: a node id and its distance."""

    id: int
    dist: float

    def __post_init__(self) -> None:
        if self.id < 0:
            raise ValueError(f"neighbor id must be non-negative, got {self.id}")
        if not (self.dist >= 0.0):
            raise ValueError(f"neighbor distance must be non-negative, got {self.dist}")


@dataclass
class NeighborGraph:
    """Directed neighbor lists over n nodes, in CSR layout.

    kind is "knn" or "dpg"; param holds K for knn graphs and kappa for dpg
    graphs.  indptr has length n + 1, and neighbor_ids / neighbor_dists hold
    the concatenated adjacency lists.
    """

    kind: str
    param: int
    indptr: np.ndarray
    neighbor_ids: np.ndarray
    neighbor_dists: np.ndarray
    n: int = field(init=False)

    def __post_init__(self) -> None:
        if self.kind not in _KINDS:
            raise ValueError(f"unknown graph kind {self.kind!r}")
        if self.param < 1:
            raise ValueError(f"graph parameter must be positive, got {self.param}")
        self.indptr = np.ascontiguousarray(self.indptr, dtype=np.int64)
        self.neighbor_ids = np.ascontiguousarray(self.neighbor_ids, dtype=np.int32)
        self.neighbor_dists = np.ascontiguousarray(self.neighbor_dists, dtype=np.float32)
        if self.indptr.ndim != 1 or self.indptr.shape[0] < 2:
            raise ValueError("indptr must be a 1-d array of length n + 1 with n >= 1")
        self.n = self.indptr.shape[0] - 1
        if self.neighbor_ids.shape != self.neighbor_dists.shape or self.neighbor_ids.ndim != 1:
            raise ValueError("neighbor_ids and neighbor_dists must be 1-d and equally long")
        if self.indptr[0] != 0 or self.indptr[-1] != self.neighbor_ids.shape[0]:
            raise ValueError("indptr does not cover the neighbor arrays")

    @classmethod
    def from_uniform(cls, kind: str, param: int, ids: np.ndarray, dists: np.ndarray) -> "NeighborGraph":
        """Build from dense (n, deg) id and distance matrices."""
        ids = np.ascontiguousarray(ids, dtype=np.int32)
        dists = np.ascontiguousarray(dists, dtype=np.float32)
        if ids.ndim != 2 or ids.shape != dists.shape:
            raise ValueError("ids and dists must be matching 2-d arrays")
        n, deg = ids.shape
        indptr = np.arange(0, (n + 1) * deg, deg, dtype=np.int64)
        return cls(kind, param, indptr, ids.ravel(), dists.ravel())

    @property
    def num_edges(self) -> int:
        return int(self.neighbor_ids.shape[0])

    def degree(self, u: int) -> int:
        return int(self.indptr[u + 1] - self.indptr[u])

    def neighbors(self, u: int) -> tuple[np.ndarray, np.ndarray]:
        """Adjacency list of node u as (ids, dists) array views."""
        lo, hi = self.indptr[u], self.indptr[u + 1]
        return self.neighbor_ids[lo:hi], self.neighbor_dists[lo:hi]

    def neighbor_list(self, u: int) -> list[Neighbor]:
        ids, dists = self.neighbors(u)
        return [Neighbor(int(i), float(d)) for i, d in zip(ids, dists)]

    def _edge_sources(self) -> np.ndarray:
        counts = np.diff(self.indptr)
        return np.repeat(np.arange(self.n, dtype=np.int32), counts)

    def is_symmetric(self) -> bool:
        """True when the directed edge set is closed under reversal."""
        src = self._edge_sources()
        dst = self.neighbor_ids
        fwd = np.lexsort((dst, src))
        rev = np.lexsort((src, dst))
        return bool(
            np.array_equal(src[fwd], dst[rev]) and np.array_equal(dst[fwd], src[rev])
        )

    def reverse_csr(self) -> tuple[np.ndarray, np.ndarray]:
        """CSR adjacency of the reversed edge set (in-edges per node)."""
        src = self._edge_sources()
        dst = self.neighbor_ids
        order = np.argsort(dst, kind="stable")
        counts = np.bincount(dst, minlength=self.n)
        indptr = np.zeros(self.n + 1, dtype=np.int64)
        np.cumsum(counts, out=indptr[1:])
        return indptr, src[order].astype(np.int32, copy=False)

    def validate(self) -> None:
        """Check all structural invariants, raising GraphStructureError.

        Common: ids in range, no self-loops, each list sorted ascending by
        (dist, id) with no duplicate ids.  knn: every list has exactly
        min(K, n - 1) entries.  dpg: symmetric, at most 2 * kappa * n edges,
        and every list no shorter than kappa (capped by n - 1).
        """
        ids = self.neighbor_ids
        dists = self.neighbor_dists
        if ids.size and (ids.min() < 0 or ids.max() >= self.n):
            raise GraphStructureError("neighbor id out of range")
        if np.any(dists < 0.0) or not np.isfinite(dists).all():
            raise GraphStructureError("neighbor distances must be finite and non-negative")
        src = self._edge_sources()
        if np.any(src == ids):
            raise GraphStructureError("self-loop found")
        # Sorted ascending by (dist, id) within each list.
        inner = np.ones(ids.shape[0], dtype=bool)
        inner[self.indptr[1:-1]] = False  # list boundaries
        inner = inner[1:]
        d0, d1 = dists[:-1][inner], dists[1:][inner]
        i0, i1 = ids[:-1][inner], ids[1:][inner]
        bad = (d0 > d1) | ((d0 == d1) & (i0 >= i1))
        if np.any(bad):
            raise GraphStructureError("adjacency list not sorted ascending by (dist, id)")
        # Duplicate ids within a list.
        order = np.lexsort((ids, src))
        same = (src[order][1:] == src[order][:-1]) & (ids[order][1:] == ids[order][:-1])
        if np.any(same):
            raise GraphStructureError("duplicate neighbor id within a list")
        degrees = np.diff(self.indptr)
        if self.kind == KNN:
            want = min(self.param, self.n - 1)
            if np.any(degrees != want):
                raise GraphStructureError(
                    f"knn graph must have uniform degree {want}, "
                    f"got degrees in [{degrees.min()}, {degrees.max()}]"
                )
        else:
            cap = 2 * self.param * self.n
            if self.num_edges > cap:
                raise GraphStructureError(
                    f"dpg graph has {self.num_edges} edges, cap is {cap}"
                )
            floor = min(self.param, self.n - 1)
            if np.any(degrees < floor):
                raise GraphStructureError(f"dpg node degree below {floor}")
            if not self.is_symmetric():
                raise GraphStructureError("dpg graph must be symmetric")
