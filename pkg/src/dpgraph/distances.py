"""Euclidean distance and angle primitives.

Distances are accumulated in float64 and reported quantized to float32 so
that every part of the library (graph construction, search, brute force)
agrees bitwise on the distance between a given pair of points.  Ordering
comparisons elsewhere are therefore done in float32 with ties broken by
ascending point id.
"""

from __future__ import annotations

import numpy as np

from .errors import DegenerateGeometryError

# Rows per chunk in streaming scans, sized to keep float64 temporaries small.
_SCAN_BLOCK_FLOATS = 4_000_000


def euclidean_distance(a, b) -> float:
    """Euclidean distance between two vectors, accumulated in float64."""
    av = np.asarray(a, dtype=np.float64).ravel()
    bv = np.asarray(b, dtype=np.float64).ravel()
    if av.shape != bv.shape:
        raise ValueError(f"dimension mismatch: {av.shape[0]} vs {bv.shape[0]}")
    diff = av - bv
    return float(np.sqrt(np.dot(diff, diff)))


def angle_at(p, x, y) -> float:
    """Angle in radians subtended at p by points x and y.

    Raises DegenerateGeometryError when x or y coincides with p, because the
    direction of a zero-length difference vector is undefined.
    """
    pv = np.asarray(p, dtype=np.float64).ravel()
    u = np.asarray(x, dtype=np.float64).ravel() - pv
    v = np.asarray(y, dtype=np.float64).ravel() - pv
    if u.shape != v.shape:
        raise ValueError(f"dimension mismatch: {u.shape[0]} vs {v.shape[0]}")
    nu = np.sqrt(np.dot(u, u))
    nv = np.sqrt(np.dot(v, v))
    if nu == 0.0 or nv == 0.0:
        raise DegenerateGeometryError("angle undefined: point coincides with the apex")
    c = np.dot(u, v) / (nu * nv)
    return float(np.arccos(np.clip(c, -1.0, 1.0)))


def point_distances(data: np.ndarray, query: np.ndarray, out_dtype=np.float32) -> np.ndarray:
    """Distances from one query vector to every row of data.

    Streams over the rows in fixed-size blocks; accumulation is float64 and
    the result is quantized to out_dtype (float32 by default).
    """
    n, d = data.shape
    q = np.asarray(query, dtype=np.float64).ravel()
    if q.shape[0] != d:
        raise ValueError(f"query has dimension {q.shape[0]}, expected {d}")
    out = np.empty(n, dtype=out_dtype)
    block = max(1, _SCAN_BLOCK_FLOATS // d)
    for lo in range(0, n, block):
        hi = min(lo + block, n)
        diff = data[lo:hi].astype(np.float64) - q
        out[lo:hi] = np.sqrt(np.einsum("ij,ij->i", diff, diff))
    return out
