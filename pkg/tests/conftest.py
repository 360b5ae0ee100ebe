"""Shared fixtures.

Heavy artifacts (preset datasets, their graphs, ground truth) are built
once per session and shared; the acceptance tests lean on these so the
whole suite stays within a desk-scale time budget.
"""

from __future__ import annotations

import numpy as np
import pytest

import dpgraph as dg


@pytest.fixture(scope="session")
def warm_kernels():
    """Compile / load the jitted kernels before anything timed runs."""
    ds = dg.gen_random_ball(64, 4, seed=11)
    graph = dg.build_knn_graph(ds, dg.NnDescentParams(n_neighbors=4, seed=11))
    dg.greedy_search(ds, graph, ds.data[0], dg.SearchParams(k=2, pool_size=8))
    return True


@pytest.fixture(scope="session")
def tiny_ball():
    return dg.gen_random_ball(800, 8, seed=42)


@pytest.fixture(scope="session")
def tiny_exact10(tiny_ball):
    return dg.exact_knn_graph(tiny_ball, 10)


@pytest.fixture(scope="session")
def tiny_dpg(tiny_ball):
    knn = dg.build_knn_graph(tiny_ball, dg.NnDescentParams(n_neighbors=10))
    return dg.build_dpg_from_knn(tiny_ball, knn, dg.DpgParams(kappa=5))


@pytest.fixture(scope="session")
def rand10k():
    """The rand-10k-d32 preset split into (reference, 200 queries)."""
    full = dg.make_preset("rand-10k-d32")
    ref, queries = dg.split_queries(full, 200, seed=42)
    return ref, queries


@pytest.fixture(scope="session")
def rand10k_knn40(rand10k):
    ref, _ = rand10k
    return dg.build_knn_graph(ref, dg.NnDescentParams(n_neighbors=40))


@pytest.fixture(scope="session")
def rand10k_dpg(rand10k, rand10k_knn40):
    ref, _ = rand10k
    return dg.build_dpg_from_knn(ref, rand10k_knn40, dg.DpgParams(kappa=20))


@pytest.fixture(scope="session")
def rand10k_gt(rand10k):
    ref, queries = rand10k
    return dg.build_ground_truth(ref, queries, 20)


@pytest.fixture(scope="session")
def gauss10k():
    """The gauss-10k-d32-c10 preset split into (reference, 200 queries)."""
    full = dg.make_preset("gauss-10k-d32-c10")
    ref, queries = dg.split_queries(full, 200, seed=42)
    return ref, queries


@pytest.fixture(scope="session")
def gauss10k_knn40(gauss10k):
    ref, _ = gauss10k
    return dg.build_knn_graph(ref, dg.NnDescentParams(n_neighbors=40))


@pytest.fixture(scope="session")
def gauss10k_dpg(gauss10k, gauss10k_knn40):
    ref, _ = gauss10k
    return dg.build_dpg_from_knn(ref, gauss10k_knn40, dg.DpgParams(kappa=20))


@pytest.fixture(scope="session")
def gauss10k_gt(gauss10k):
    ref, queries = gauss10k
    return dg.build_ground_truth(ref, queries, 20)


@pytest.fixture(scope="session")
def rand5k():
    return dg.make_preset("rand-5k-d20")
