"""Synthetic dataset and query workload generation.

All generators draw from numpy's PCG64 via default_rng, stream in fixed
chunk sizes, and cast to float32 only at the end, so a given (generator,
seed) pair produces identical bytes on every run and platform.
"""

from __future__ import annotations

import numpy as np

from .data import DenseDataset, QuerySet, as_dataset, as_queries

# Rows generated per chunk; fixed so chunking never changes the stream.
_GEN_CHUNK = 65_536


def _check_counts(n: int, d: int) -> None:
    if n < 1:
        raise ValueError(f"n must be positive, got {n}")
    if d < 1:
        raise ValueError(f"d must be positive, got {d}")


def gen_random_ball(n: int, d: int, seed: int = 42) -> DenseDataset:
    """n points uniform in the d-dimensional unit ball.

    Directions come from normalized Gaussians and radii from u ** (1 / d)
    with u uniform, which together are uniform over the ball's volume.
    """
    _check_counts(n, d)
    rng = np.random.default_rng(seed)
    out = np.empty((n, d), dtype=np.float32)
    for lo in range(0, n, _GEN_CHUNK):
        hi = min(lo + _GEN_CHUNK, n)
        g = rng.standard_normal((hi - lo, d))
        norms = np.sqrt(np.einsum("ij,ij->i", g, g))
        norms[norms == 0.0] = 1.0
        r = rng.random(hi - lo) ** (1.0 / d)
        out[lo:hi] = (g * (r / norms)[:, None]).astype(np.float32)
    return DenseDataset(out)


def gen_gauss_clusters(
    n: int,
    d: int,
    num_clusters: int = 1000,
    box_hi: float = 10.0,
    sigma: float = 1.0,
    seed: int = 42,
) -> DenseDataset:
    """Gaussian blobs around uniform random centers in [0, box_hi]^d.

    Every point picks a center uniformly at random and adds isotropic
    N(0, sigma^2) noise.
    """
    _check_counts(n, d)
    if num_clusters < 1:
        raise ValueError(f"num_clusters must be positive, got {num_clusters}")
    if box_hi <= 0.0 or sigma < 0.0:
        raise ValueError("box_hi must be positive and sigma non-negative")
    rng = np.random.default_rng(seed)
    centers = rng.uniform(0.0, box_hi, size=(num_clusters, d))
    assign = rng.integers(0, num_clusters, size=n)
    out = np.empty((n, d), dtype=np.float32)
    for lo in range(0, n, _GEN_CHUNK):
        hi = min(lo + _GEN_CHUNK, n)
        noise = rng.normal(0.0, sigma, size=(hi - lo, d)) if sigma > 0.0 else 0.0
        out[lo:hi] = (centers[assign[lo:hi]] + noise).astype(np.float32)
    return DenseDataset(out)


def gen_line(n: int, d: int = 1) -> DenseDataset:
    """n evenly spaced points 0, 1, ..., n - 1 along the first axis."""
    _check_counts(n, d)
    out = np.zeros((n, d), dtype=np.float32)
    out[:, 0] = np.arange(n, dtype=np.float32)
    return DenseDataset(out)


def split_queries(dataset: DenseDataset, m: int, seed: int = 42) -> tuple[DenseDataset, QuerySet]:
    """Randomly remove m points to serve as held-out queries.

    Returns (remaining dataset, removed points as queries); the remaining
    points keep their relative order.
    """
    ds = as_dataset(dataset)
    if not 1 <= m < ds.n:
        raise ValueError(f"m must be in [1, n - 1], got m={m} for n={ds.n}")
    rng = np.random.default_rng(seed)
    picked = rng.choice(ds.n, size=m, replace=False)
    mask = np.ones(ds.n, dtype=bool)
    mask[picked] = False
    return DenseDataset(ds.data[mask]), QuerySet(ds.data[picked])


def perturb_queries(queries: QuerySet, delta: float, seed: int = 42) -> QuerySet:
    """Displace every query by exactly delta along a random direction.

    Directions are uniform on the unit sphere, so growing delta moves the
    workload away from the data, flattening the distance profile: relative
    contrast drops toward 1 and the queries get harder.
    """
    qs = as_queries(queries)
    if delta < 0.0:
        raise ValueError(f"delta must be non-negative, got {delta}")
    rng = np.random.default_rng(seed)
    g = rng.standard_normal((qs.m, qs.d))
    norms = np.sqrt(np.einsum("ij,ij->i", g, g))
    norms[norms == 0.0] = 1.0
    moved = qs.data.astype(np.float64) + g * (delta / norms)[:, None]
    return QuerySet(moved.astype(np.float32))


PRESETS = {
    "rand-10k-d32": dict(kind="ball", n=10_000, d=32),
    "gauss-10k-d32-c10": dict(kind="gauss", n=10_000, d=32, num_clusters=10),
    "line-1k": dict(kind="line", n=1_000, d=1),
    "rand-5k-d20": dict(kind="ball", n=5_000, d=20),
}


def make_preset(name: str, seed: int = 42) -> DenseDataset:
    """Build one of the named example workloads."""
    if name not in PRESETS:
        raise ValueError(f"unknown preset {name!r}; choose from {sorted(PRESETS)}")
    cfg = dict(PRESETS[name])
    kind = cfg.pop("kind")
    if kind == "ball":
        return gen_random_ball(seed=seed, **cfg)
    if kind == "gauss":
        return gen_gauss_clusters(seed=seed, **cfg)
    return gen_line(**cfg)
