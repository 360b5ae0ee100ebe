"""Estimator-style front end: fit an index on points, query neighbors.

KnnGraphIndex fits an NN-descent K-NN graph; DiversifiedGraphIndex fits
the diversified, symmetrized variant.  Both follow the usual estimator
conventions: constructor only stores hyperparameters, fit(X) builds the
index and sets trailing-underscore attributes, kneighbors(X) searches and
returns (distances, indices) arrays, and get_params / set_params work for
cloning and grid search.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.exceptions import NotFittedError

from .data import DenseDataset, as_dataset, as_queries
from .diversify import DpgParams, build_dpg_from_knn
from .graph import NeighborGraph
from .nndescent import NnDescentParams, build_knn_graph
from .search import SearchParams, search_queries


class _GraphIndexBase(BaseEstimator):
    """Shared fit bookkeeping and the kneighbors query path."""

    dataset_: DenseDataset
    graph_: NeighborGraph
    n_features_in_: int

    def _check_fitted(self) -> None:
        if not hasattr(self, "graph_"):
            raise NotFittedError(
                f"This {type(self).__name__} instance is not fitted yet; call fit first."
            )

    def _fit_dataset(self, X) -> DenseDataset:
        ds = as_dataset(X)
        self.dataset_ = ds
        self.n_features_in_ = ds.d
        return ds

    def kneighbors(
        self,
        X,
        n_neighbors: int | None = None,
        return_distance: bool = True,
        pool_size: int | None = None,
        entry_count: int = 10,
        seed: int | None = None,
    ):
        """Approximate nearest neighbors of each row of X.

        Returns (distances, indices) arrays of shape (m, n_neighbors), or
        just indices when return_distance is False.  pool_size defaults
        to twice n_neighbors; seed defaults to the estimator's
        random_state.
        """
        self._check_fitted()
        k = self.default_k if n_neighbors is None else int(n_neighbors)
        if k < 1:
            raise ValueError(f"n_neighbors must be positive, got {k}")
        pool = 2 * k if pool_size is None else int(pool_size)
        pool = max(pool, k)
        params = SearchParams(
            k=k,
            pool_size=min(pool, self.dataset_.n),
            entry_count=entry_count,
            seed=self.random_state if seed is None else seed,
        )
        qs = as_queries(X, self.n_features_in_)
        ids, dists, _ = search_queries(self.dataset_, self.graph_, qs, params)
        if return_distance:
            return dists.astype(np.float64), ids.astype(np.int64)
        return ids.astype(np.int64)

    @property
    def default_k(self) -> int:
        return 20


class KnnGraphIndex(_GraphIndexBase):
    """Approximate K-NN graph index built with NN-descent.

    Parameters mirror the builder: n_neighbors is the graph out-degree K,
    sample_rate and termination control the NN-descent refinement loop.
    """

    def __init__(
        self,
        n_neighbors: int = 40,
        sample_rate: float = 0.5,
        termination: float = 0.002,
        max_iters: int = 30,
        random_state: int = 42,
    ):
        self.n_neighbors = n_neighbors
        self.sample_rate = sample_rate
        self.termination = termination
        self.max_iters = max_iters
        self.random_state = random_state

    def fit(self, X, y=None):
        ds = self._fit_dataset(X)
        params = NnDescentParams(
            n_neighbors=self.n_neighbors,
            sample_rate=self.sample_rate,
            termination=self.termination,
            max_iters=self.max_iters,
            seed=self.random_state,
        )
        self.graph_ = build_knn_graph(ds, params)
        return self


class DiversifiedGraphIndex(_GraphIndexBase):
    """Diversified proximity graph index.

    Fits an NN-descent graph with graph_neighbors out-edges (2 * kappa
    unless overridden), keeps the kappa most diverse neighbors per node
    using the chosen method ("counting" or "angular"), and adds reverse
    edges so the final graph is symmetric.
    """

    def __init__(
        self,
        kappa: int = 20,
        method: str = "counting",
        graph_neighbors: int | None = None,
        sample_rate: float = 0.5,
        termination: float = 0.002,
        max_iters: int = 30,
        angular_spread: bool = True,
        random_state: int = 42,
    ):
        self.kappa = kappa
        self.method = method
        self.graph_neighbors = graph_neighbors
        self.sample_rate = sample_rate
        self.termination = termination
        self.max_iters = max_iters
        self.angular_spread = angular_spread
        self.random_state = random_state

    def fit(self, X, y=None):
        ds = self._fit_dataset(X)
        K = 2 * self.kappa if self.graph_neighbors is None else self.graph_neighbors
        nn_params = NnDescentParams(
            n_neighbors=K,
            sample_rate=self.sample_rate,
            termination=self.termination,
            max_iters=self.max_iters,
            seed=self.random_state,
        )
        dpg_params = DpgParams(
            kappa=self.kappa, method=self.method, angular_spread=self.angular_spread
        )
        self.knn_graph_ = build_knn_graph(ds, nn_params)
        self.graph_ = build_dpg_from_knn(ds, self.knn_graph_, dpg_params)
        return self
