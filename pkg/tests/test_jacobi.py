import numpy as np
import pytest
from hypothesis import given
from numpy.testing import assert_allclose

from qcorr.jacobi import ConvergenceError, jacobi_eigh

from conftest import hermitian_4x4


def random_hermitian(rng, shape):
    a = rng.normal(size=shape + (4, 4)) + 1j * rng.normal(size=shape + (4, 4))
    return (a + np.swapaxes(a, -1, -2).conj()) / 2


def test_matches_lapack_on_batch():
    rng = np.random.default_rng(0)
    a = random_hermitian(rng, (500,))
    assert_allclose(jacobi_eigh(a), np.linalg.eigvalsh(a), atol=1e-12)


def test_eigenvectors_reconstruct():
    rng = np.random.default_rng(1)
    a = random_hermitian(rng, (200,))
    w, v = jacobi_eigh(a, vectors=True)
    rebuilt = v @ (w[..., None] * np.swapaxes(v, -1, -2).conj())
    assert_allclose(rebuilt, a, atol=1e-11)
    eye = np.swapaxes(v, -1, -2).conj() @ v
    assert_allclose(eye, np.broadcast_to(np.eye(4), eye.shape), atol=1e-12)


def test_diagonal_and_degenerate_inputs():
    assert_allclose(jacobi_eigh(np.diag([3.0, -1.0, 2.0, 0.0])), [-1, 0, 2, 3])
    assert_allclose(jacobi_eigh(np.eye(4)), np.ones(4))
    assert_allclose(jacobi_eigh(np.zeros((4, 4))), np.zeros(4))


def test_ascending_order():
    w = jacobi_eigh(random_hermitian(np.random.default_rng(2), (50,)))
    assert np.all(np.diff(w, axis=-1) >= 0)


def test_nonconvergence_is_reported():
    a = random_hermitian(np.random.default_rng(3), ())
    with pytest.raises(ConvergenceError):
        jacobi_eigh(a, max_sweeps=1)


@given(hermitian_4x4())
def test_trace_and_frobenius_preserved(a):
    w = jacobi_eigh(a)
    scale = max(1.0, np.linalg.norm(a))
    assert abs(w.sum() - np.trace(a).real) < 1e-12 * scale * 10
    assert abs(np.sum(w**2) - np.linalg.norm(a) ** 2) < 1e-11 * scale**2
