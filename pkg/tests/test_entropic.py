import numpy as np
import pytest
from hypothesis import given, settings
from numpy.testing import assert_allclose

from qcorr.core import bell_density, sample_physical
from qcorr.entropic import (
    c_e_closed,
    c_e_from_c_g,
    dce_dcg,
    entropic_triple,
    mutual_information,
    q_e_direct,
    t_e_closed,
    von_neumann_entropy,
    xlog2x,
)
from qcorr.geometric import c_g_closed

from conftest import physical_states


def test_xlog2x_edges():
    assert_allclose(xlog2x([0.0, -5e-13, 0.5, 1.0]), [0.0, 0.0, -0.5, 0.0])


def test_known_triples():
    assert_allclose(entropic_triple((0.5, -0.4, 0.3)), [0.12978, 0.18872, 0.31850], atol=5e-5)
    assert_allclose(entropic_triple((-0.8, -0.8, -0.8)), [0.62141, 0.53100, 1.15242], atol=5e-5)


def test_bell_vertex_and_identity():
    assert_allclose(entropic_triple((1, -1, 1)), [1.0, 1.0, 2.0], atol=1e-12)
    assert_allclose(entropic_triple((0, 0, 0)), [0.0, 0.0, 0.0], atol=1e-15)


def test_total_correlation_equals_mutual_information():
    cs = sample_physical(3, 300)
    assert_allclose(t_e_closed(cs), mutual_information(bell_density(cs)), atol=1e-11)


def test_entropy_of_maximally_mixed():
    assert von_neumann_entropy(np.eye(4) / 4) == pytest.approx(2.0)


@pytest.mark.parametrize("c", [(0.5, -0.4, 0.3), (-0.8, -0.8, -0.8), (0.1, 0.6, -0.2)])
def test_discord_matches_direct_minimization(c):
    # A grid of 1 degree plus refinement reaches the minimum to well below 1e-6.
    from qcorr.entropic import q_e_closed

    assert q_e_direct(c) == pytest.approx(q_e_closed(c), abs=1e-6)


def test_dce_dcg_values():
    assert dce_dcg(0.5) == pytest.approx(0.792481, abs=1e-6)
    assert dce_dcg(0.6) == pytest.approx(1.0, abs=1e-12)
    for bad in (0.0, 1.0, -0.1):
        with pytest.raises(ValueError):
            dce_dcg(bad)


def test_dce_dcg_matches_finite_difference():
    x = np.linspace(0.01, 0.99, 200)
    h = 1e-6
    fd = (c_e_from_c_g(x + h) - c_e_from_c_g(x - h)) / (2 * h)
    assert_allclose(dce_dcg(x), fd, atol=1e-6)


def test_c_e_from_c_g_domain():
    with pytest.raises(ValueError):
        c_e_from_c_g(1.2)
    assert c_e_from_c_g(1.0) == pytest.approx(1.0)


@given(physical_states())
def test_additivity_and_link(c):
    q, cl, t = entropic_triple(c)
    assert abs(t - cl - q) < 1e-12
    assert abs(c_e_closed(c) - c_e_from_c_g(c_g_closed(c))) < 1e-12
    assert min(q, cl, t) >= -1e-12 and t <= 2 + 1e-12
