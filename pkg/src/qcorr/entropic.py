"""Entropic (mutual-information based) correlations of Bell-diagonal states.

All quantities are in bits. ``0 log 0`` is taken as 0, and eigenvalues in
``[-1e-12, 0)`` are clipped to zero before any logarithm.
"""

from typing import NamedTuple

import numpy as np

from qcorr.core import (
    apply_measurement,
    bell_density,
    hermitian_eigenvalues,
    order_magnitudes,
    partial_traces,
    require_physical,
    spectrum_bell,
)
from qcorr.search import minimize_on_sphere

CLIP = 1e-12
SPHERE_RESOLUTION = 90


class EntropicTriple(NamedTuple):
    q_e: float
    c_e: float
    t_e: float


def xlog2x(p):
    """Elementwise p log2 p with the continuous extension 0 at p = 0."""
    p = np.asarray(p, dtype=float)
    p = np.where((p < 0.0) & (p >= -CLIP), 0.0, p)
    safe = np.where(p > 0.0, p, 1.0)
    return np.where(p > 0.0, p * np.log2(safe), 0.0)


def von_neumann_entropy(rho):
    w = hermitian_eigenvalues(rho)
    return -np.sum(xlog2x(w), axis=-1)


def _scalar(x):
    return float(x) if np.ndim(x) == 0 else x


def _binary_classical(x):
    # log2[(1-x)^((1-x)/2) (1+x)^((1+x)/2)]
    return 0.5 * (xlog2x(1.0 - x) + xlog2x(1.0 + x))


def c_e_closed(c):
    """Classical correlation C_E, a function of c_plus only."""
    c = require_physical(c)
    return _scalar(_binary_classical(order_magnitudes(c).c_plus))


def t_e_closed(c):
    """Total correlation T_E = 2 + sum_ij lambda_ij log2 lambda_ij."""
    c = require_physical(c)
    return _scalar(2.0 + np.sum(xlog2x(spectrum_bell(c)), axis=-1))


def q_e_closed(c):
    """Entropic discord Q_E = T_E - C_E."""
    c = require_physical(c)
    return _scalar(t_e_closed(c) - c_e_closed(c))


def entropic_triple(c):
    c = require_physical(c)
    t = t_e_closed(c)
    cl = c_e_closed(c)
    return EntropicTriple(_scalar(t - cl), cl, t)


def mutual_information(rho):
    """I(rho) = S(rho_a) + S(rho_b) - S(rho), from Jacobi spectra."""
    rho_a, rho_b = partial_traces(rho)
    return _scalar(
        von_neumann_entropy(rho_a) + von_neumann_entropy(rho_b) - von_neumann_entropy(rho)
    )


def q_e_direct(c, resolution=SPHERE_RESOLUTION):
    """Minimize |I(rho) - I(M_n(rho))| over measurement directions n.

    Independent of the closed forms: only the eigensolver and the
    measurement map are used.
    """
    c = require_physical(c)
    rho = bell_density(c)
    total = mutual_information(rho)

    def loss(n):
        return np.abs(total - mutual_information(apply_measurement(rho, n)))

    return minimize_on_sphere(loss, resolution).value


def c_e_from_c_g(x):
    """C_E as a function of the geometric classical correlation C_G in [0, 1]."""
    x = np.asarray(x, dtype=float)
    if np.any((x < 0.0) | (x > 1.0)):
        raise ValueError("C_G must lie in [0, 1]")
    return _scalar(_binary_classical(x))


def dce_dcg(x):
    """Derivative dC_E/dC_G = log2 sqrt((1 + x) / (1 - x)) on the open interval (0, 1)."""
    x = np.asarray(x, dtype=float)
    if np.any((x <= 0.0) | (x >= 1.0)):
        raise ValueError("derivative defined only for C_G in (0, 1)")
    return _scalar(np.arctanh(x) / np.log(2.0))
