import numpy as np
import pytest

from dpgraph import DPG, KNN, GraphStructureError, Neighbor, NeighborGraph


def square_graph():
    """Four nodes in a directed square with distance 1 edges."""
    ids = np.array([[1], [2], [3], [0]], dtype=np.int32)
    dists = np.ones((4, 1), dtype=np.float32)
    return NeighborGraph.from_uniform(KNN, 1, ids, dists)


def test_neighbor_validation():
    Neighbor(0, 0.0)
    with pytest.raises(ValueError):
        Neighbor(-1, 1.0)
    with pytest.raises(ValueError):
        Neighbor(2, -0.5)
    with pytest.raises(ValueError):
        Neighbor(2, float("nan"))


def test_from_uniform_structure():
    g = square_graph()
    assert (g.n, g.num_edges, g.kind, g.param) == (4, 4, KNN, 1)
    assert g.degree(2) == 1
    ids, dists = g.neighbors(2)
    np.testing.assert_array_equal(ids, [3])
    assert g.neighbor_list(2) == [Neighbor(3, 1.0)]
    g.validate()


def test_bad_kind_and_param():
    with pytest.raises(ValueError, match="kind"):
        NeighborGraph("weird", 1, [0, 1], [0], [1.0])
    with pytest.raises(ValueError, match="parameter"):
        NeighborGraph.from_uniform(KNN, 0, np.zeros((1, 1), np.int32), np.ones((1, 1), np.float32))


def test_indptr_coverage_check():
    with pytest.raises(ValueError, match="cover"):
        NeighborGraph(KNN, 1, [0, 2], [1], [1.0])


def test_validate_id_range():
    g = square_graph()
    g.neighbor_ids[0] = 9
    with pytest.raises(GraphStructureError, match="range"):
        g.validate()


def test_validate_self_loop():
    g = square_graph()
    g.neighbor_ids[0] = 0
    with pytest.raises(GraphStructureError, match="self-loop"):
        g.validate()


def test_validate_negative_distance():
    g = square_graph()
    g.neighbor_dists[1] = -1.0
    with pytest.raises(GraphStructureError, match="non-negative"):
        g.validate()


def test_validate_sorted_within_list():
    ids = np.array([[1, 2], [0, 2], [0, 1]], dtype=np.int32)
    dists = np.array([[2.0, 1.0], [1.0, 2.0], [1.0, 2.0]], dtype=np.float32)
    g = NeighborGraph.from_uniform(KNN, 2, ids, dists)
    with pytest.raises(GraphStructureError, match="sorted"):
        g.validate()


def test_validate_tie_needs_id_order():
    # Equal distances must fall back to ascending ids.
    ids = np.array([[2, 1], [0, 2], [0, 1]], dtype=np.int32)
    dists = np.ones((3, 2), dtype=np.float32)
    g = NeighborGraph.from_uniform(KNN, 2, ids, dists)
    with pytest.raises(GraphStructureError, match="sorted"):
        g.validate()


def test_validate_duplicate_id():
    ids = np.array([[1, 1], [0, 2], [0, 1]], dtype=np.int32)
    dists = np.array([[1.0, 2.0], [1.0, 2.0], [1.0, 2.0]], dtype=np.float32)
    g = NeighborGraph.from_uniform(KNN, 2, ids, dists)
    with pytest.raises(GraphStructureError, match="duplicate"):
        g.validate()


def test_validate_knn_uniform_degree():
    indptr = np.array([0, 2, 3, 4])
    ids = np.array([1, 2, 0, 0], dtype=np.int32)
    dists = np.array([1.0, 2.0, 1.0, 1.0], dtype=np.float32)
    g = NeighborGraph(KNN, 2, indptr, ids, dists)
    with pytest.raises(GraphStructureError, match="uniform degree"):
        g.validate()


def test_validate_dpg_symmetry():
    g = square_graph()
    g.kind = DPG  # a directed cycle is not symmetric
    with pytest.raises(GraphStructureError, match="symmetric"):
        g.validate()


def test_validate_dpg_accepts_symmetric():
    ids = np.array([[1], [0]], dtype=np.int32)
    dists = np.ones((2, 1), dtype=np.float32)
    g = NeighborGraph.from_uniform(DPG, 1, ids, dists)
    g.validate()


def _complete_dpg(n, kappa):
    """Symmetric unit-distance complete graph filed under kind dpg."""
    ids = np.array([[j for j in range(n) if j != i] for i in range(n)], dtype=np.int32)
    dists = np.ones((n, n - 1), dtype=np.float32)
    return NeighborGraph.from_uniform(DPG, kappa, ids, dists)


def test_validate_dpg_edge_cap():
    # A symmetric triangle holds 6 directed edges, exactly 2 * kappa * n
    # for kappa = 1, so it passes; the complete 4-node graph has 12 > 8
    # and must be rejected.
    _complete_dpg(3, 1).validate()
    with pytest.raises(GraphStructureError, match="cap"):
        _complete_dpg(4, 1).validate()


def test_is_symmetric():
    assert not square_graph().is_symmetric()
    ids = np.array([[1], [0]], dtype=np.int32)
    g = NeighborGraph.from_uniform(DPG, 1, ids, np.ones((2, 1), np.float32))
    assert g.is_symmetric()


def test_reverse_csr_oracle():
    g = square_graph()  # edges 0->1, 1->2, 2->3, 3->0
    indptr, ids = g.reverse_csr()
    np.testing.assert_array_equal(indptr, [0, 1, 2, 3, 4])
    np.testing.assert_array_equal(ids, [3, 0, 1, 2])
