"""Dataset containers and input validation helpers.

All point collections are stored row-major as float32, one point per row.
Containers are treated as immutable after construction; callers must not
mutate the underlying arrays.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


def as_float32_matrix(values, name: str = "data") -> np.ndarray:
    """Coerce input to a C-contiguous float32 matrix, rejecting bad shapes.

    Raises ValueError for non-2d input, empty axes, or non-finite values.
    """
    arr = np.asarray(values)
    if arr.ndim != 2:
        raise ValueError(f"{name} must be a 2-d array, got ndim={arr.ndim}")
    if arr.shape[0] < 1 or arr.shape[1] < 1:
        raise ValueError(f"{name} must be non-empty, got shape {arr.shape}")
    if arr.dtype.kind not in "fiu":
        raise ValueError(f"{name} must be numeric, got dtype {arr.dtype}")
    out = np.ascontiguousarray(arr, dtype=np.float32)
    if not np.isfinite(out).all():
        raise ValueError(f"{name} contains NaN or infinite values")
    return out


@dataclass(frozen=True)
class DenseDataset:
    """A reference set of n points in d dimensions."""

    data: np.ndarray

    def __post_init__(self) -> None:
        object.__setattr__(self, "data", as_float32_matrix(self.data, "dataset"))

    @property
    def n(self) -> int:
        return self.data.shape[0]

    @property
    def d(self) -> int:
        return self.data.shape[1]

    def __repr__(self) -> str:
        return f"DenseDataset(n={self.n}, d={self.d})"


@dataclass(frozen=True)
class QuerySet:
    """Query points, dimensioned like the dataset they are issued against."""

    data: np.ndarray

    def __post_init__(self) -> None:
        object.__setattr__(self, "data", as_float32_matrix(self.data, "queries"))

    @property
    def m(self) -> int:
        return self.data.shape[0]

    @property
    def d(self) -> int:
        return self.data.shape[1]

    def __repr__(self) -> str:
        return f"QuerySet(m={self.m}, d={self.d})"


def as_dataset(values) -> DenseDataset:
    """Wrap raw input in a DenseDataset unless it already is one."""
    if isinstance(values, DenseDataset):
        return values
    return DenseDataset(values)


def as_queries(values, d: int | None = None) -> QuerySet:
    """Wrap raw input in a QuerySet, optionally checking dimensionality.

    A single vector of length d is promoted to a one-row query set.
    """
    if isinstance(values, QuerySet):
        qs = values
    elif isinstance(values, DenseDataset):
        qs = QuerySet(values.data)
    else:
        arr = np.asarray(values)
        if arr.ndim == 1:
            arr = arr.reshape(1, -1)
        qs = QuerySet(arr)
    if d is not None and qs.d != d:
        raise ValueError(f"queries have dimension {qs.d}, expected {d}")
    return qs
