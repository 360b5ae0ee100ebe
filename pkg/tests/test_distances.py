import math

import numpy as np
import pytest

from dpgraph import DegenerateGeometryError, angle_at, euclidean_distance
from dpgraph.distances import point_distances


def test_euclidean_known_value():
    assert euclidean_distance([1, 2, 3], [4, 6, 3]) == 5.0


def test_euclidean_zero_iff_equal():
    rng = np.random.default_rng(42)
    a = rng.normal(size=12)
    assert euclidean_distance(a, a) == 0.0
    b = a.copy()
    b[3] += 1e-6
    assert euclidean_distance(a, b) > 0.0


def test_euclidean_symmetry():
    rng = np.random.default_rng(7)
    for _ in range(20):
        a, b = rng.normal(size=(2, 9))
        assert euclidean_distance(a, b) == euclidean_distance(b, a)


def test_euclidean_dimension_mismatch():
    with pytest.raises(ValueError, match="mismatch"):
        euclidean_distance([1.0, 2.0], [1.0, 2.0, 3.0])


def test_angle_right():
    assert angle_at([0, 0], [1, 0], [0, 1]) == pytest.approx(math.pi / 2)


def test_angle_collinear():
    assert angle_at([1.0, 1.0], [2.0, 1.0], [3.0, 1.0]) == pytest.approx(0.0)
    assert angle_at([0.0, 0.0], [1.0, 0.0], [-2.0, 0.0]) == pytest.approx(math.pi)


def test_angle_clamps_roundoff():
    # Nearly identical directions can push the cosine past 1 in floating
    # point; the result must stay a real number.
    val = angle_at([0.0, 0.0, 0.0], [1.0, 1e-9, 0.0], [1.0, 0.0, 1e-9])
    assert 0.0 <= val < 1e-6


def test_angle_degenerate():
    with pytest.raises(DegenerateGeometryError):
        angle_at([1.0, 2.0], [1.0, 2.0], [0.0, 0.0])


def test_point_distances_matches_scalar():
    rng = np.random.default_rng(3)
    data = rng.normal(size=(50, 7)).astype(np.float32)
    q = rng.normal(size=7).astype(np.float32)
    got = point_distances(data, q)
    assert got.dtype == np.float32
    want = [euclidean_distance(row, q) for row in data]
    np.testing.assert_allclose(got, want, rtol=1e-6)


def test_point_distances_chunking(monkeypatch):
    import dpgraph.distances as mod

    rng = np.random.default_rng(5)
    data = rng.normal(size=(97, 6)).astype(np.float32)
    q = rng.normal(size=6).astype(np.float32)
    whole = point_distances(data, q)
    monkeypatch.setattr(mod, "_SCAN_BLOCK_FLOATS", 60)  # forces ten-row chunks
    chunked = point_distances(data, q)
    np.testing.assert_array_equal(whole, chunked)


def test_point_distances_dim_mismatch():
    with pytest.raises(ValueError, match="dimension"):
        point_distances(np.zeros((4, 3), dtype=np.float32), np.zeros(5))
