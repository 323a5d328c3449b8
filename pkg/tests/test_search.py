import numpy as np
import pytest
from numpy.testing import assert_allclose

from qcorr.search import minimize_on_simplex, minimize_on_sphere, simplex_grid, sphere_grid


def test_simplex_grid_contains_vertices_and_sums_to_one():
    g = simplex_grid(10)
    assert len(g) == 55  # 10 points per edge
    assert_allclose(g.sum(axis=1), 1.0)
    for v in np.eye(3):
        assert np.any(np.all(g == v, axis=1))


def test_sphere_grid_contains_axes():
    _, _, n = sphere_grid(18)
    assert_allclose(np.linalg.norm(n, axis=1), 1.0)
    for v in np.eye(3):
        assert np.any(np.all(np.isclose(n, v, atol=0), axis=1))


def test_simplex_minimizer_refines_interior_point():
    target = np.array([0.2137, 0.5011, 0.2852])
    res = minimize_on_simplex(lambda u: np.sum((u - target) ** 2, axis=-1), 20)
    assert res.value < 1e-8
    assert_allclose(res.point, target, atol=1e-4)


def test_sphere_minimizer_refines_direction():
    target = np.array([0.3, -0.5, 0.81])
    target /= np.linalg.norm(target)
    res = minimize_on_sphere(lambda n: -np.abs(n @ target), 18)
    assert res.value == pytest.approx(-1.0, abs=1e-8)
