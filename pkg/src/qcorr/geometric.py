"""Trace-distance (Schatten 1-norm) correlations of Bell-diagonal states.

The closed forms depend only on the sorted magnitudes c_plus >= c_mid >=
c_minus of the correlation vector:

    Q_G = c_mid,  C_G = c_plus,  T_G = (c_plus + max(c_plus, c_mid + c_minus)) / 2.

Each closed form has a matrix-level counterpart here (``*_direct``) built
from ``bell_density``, ``apply_measurement`` and ``trace_norm`` only.
"""

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from qcorr import entropic
from qcorr.core import (
    MeasurementDirection,
    apply_measurement,
    bell_density,
    order_magnitudes,
    product_of_marginals,
    require_physical,
    spectrum_bell,
    trace_norm,
)

SIMPLEX_TOL = 1e-10
RADICAND_CLIP = 1e-12
DUAL_PATH_TOL = 1e-10
T_G_MAX = 1.5


class InvariantViolation(RuntimeError):
    """A computed report broke one of the relations it must satisfy."""


class GeometricTriple(NamedTuple):
    q_g: float
    c_g: float
    t_g: float
    optimal_axis: int


@dataclass(frozen=True)
class CorrelationReport:
    c: tuple
    entropic: entropic.EntropicTriple
    geometric: GeometricTriple
    spectrum: tuple

    def as_dict(self):
        return {
            "c": list(self.c),
            "spectrum": {
                "lambda_00": self.spectrum[0],
                "lambda_01": self.spectrum[1],
                "lambda_10": self.spectrum[2],
                "lambda_11": self.spectrum[3],
            },
            "QE": self.entropic.q_e,
            "CE": self.entropic.c_e,
            "TE": self.entropic.t_e,
            "QG": self.geometric.q_g,
            "CG": self.geometric.c_g,
            "TG": self.geometric.t_g,
            "optimal_axis": self.geometric.optimal_axis,
        }


def _scalar(x):
    return float(x) if np.ndim(x) == 0 else x


def _check_simplex(u):
    u = np.asarray(u, dtype=float)
    if u.shape[-1] != 3:
        raise ValueError("simplex points have 3 components")
    if np.any(u < -SIMPLEX_TOL) or np.any(np.abs(u.sum(axis=-1) - 1.0) > SIMPLEX_TOL):
        raise ValueError("u must lie on the probability simplex")
    return np.clip(u, 0.0, None)


def gamma_pair(c, u):
    """(gamma_minus, gamma_plus): the moduli of the spectrum {+-gamma_+, +-gamma_-} of rho - M(rho).

    ``u`` is the squared measurement direction (n_1^2, n_2^2, n_3^2); it
    broadcasts against ``c``.
    """
    c = np.asarray(c, dtype=float)
    u = _check_simplex(u)
    alpha = c**2
    beta = np.stack(
        [alpha[..., 1] * alpha[..., 2], alpha[..., 0] * alpha[..., 2], alpha[..., 0] * alpha[..., 1]],
        axis=-1,
    )
    a_u = np.sum(alpha * u, axis=-1)
    b_u = np.sum(beta * u, axis=-1)
    s = np.sum(alpha, axis=-1) - a_u
    root = np.sqrt(np.where(b_u < 0.0, 0.0, b_u))
    plus = s + 2.0 * root
    # s - 2 root == (s^2 - 4 b_u) / (s + 2 root); expanding s^2 - 4 b_u over the
    # simplex in differences of alpha avoids the sqrt(roundoff) blow-up at ties.
    d = np.stack(
        [alpha[..., 1] - alpha[..., 2], alpha[..., 0] - alpha[..., 2], alpha[..., 0] - alpha[..., 1]],
        axis=-1,
    )
    u1, u2, u3 = u[..., 0], u[..., 1], u[..., 2]
    numer = (
        d[..., 0] ** 2 * (u1 - u2 * u3)
        + d[..., 1] ** 2 * (u2 - u1 * u3)
        + d[..., 2] ** 2 * (u3 - u1 * u2)
    )
    safe = np.where(plus > 0.0, plus, 1.0)
    minus = np.where(plus > 0.0, numer / safe, 0.0)
    minus = np.where((minus < 0.0) & (minus >= -RADICAND_CLIP), 0.0, minus)
    return _scalar(0.25 * np.sqrt(minus)), _scalar(0.25 * np.sqrt(plus))


def q_g_direct_at(c, n):
    """tr|rho - M_n(rho)| for one direction, evaluated by the gamma formula and by the eigensolver.

    Raises:
        InvariantViolation: if the two evaluations differ by more than 1e-10.
    """
    c = require_physical(c)
    n = np.asarray(n, dtype=float)
    g_minus, g_plus = gamma_pair(c, n**2)
    via_gamma = 2.0 * (g_minus + g_plus)
    rho = bell_density(c)
    via_matrix = trace_norm(rho - apply_measurement(rho, n))
    if abs(via_gamma - via_matrix) > DUAL_PATH_TOL:
        raise InvariantViolation(
            f"gamma formula {via_gamma!r} disagrees with trace norm {via_matrix!r} "
            f"for c={tuple(c)}, n={tuple(n)}"
        )
    return via_gamma


def q_g_closed(c):
    """1-norm geometric discord Q_G = c_mid and the optimal measurement axis.

    The optimal axis j is the one with |c_j| = c_plus (smallest index on ties).

    Returns:
        ``(q_g, axis)``; arrays when ``c`` is a stack of vectors.
    """
    c = require_physical(c)
    mags = order_magnitudes(c)
    return mags.c_mid, mags.axis


def c_g_closed(c):
    """Geometric classical correlation C_G = c_plus."""
    c = require_physical(c)
    return order_magnitudes(c).c_plus


def t_g_closed(c):
    """Geometric total correlation T_G = (c_plus + max(c_plus, c_mid + c_minus)) / 2."""
    c = require_physical(c)
    m = order_magnitudes(c)
    return _scalar(0.5 * (m.c_plus + np.maximum(m.c_plus, m.c_mid + m.c_minus)))


def t_g_direct(c):
    """T_G as sum_ij |lambda_ij - 1/4|, the spectrum of rho - pi_rho."""
    c = require_physical(c)
    return _scalar(np.sum(np.abs(spectrum_bell(c) - 0.25), axis=-1))


def optimal_direction(c):
    _, axis = q_g_closed(c)
    n = np.zeros(3)
    n[axis - 1] = 1.0
    return MeasurementDirection(*n)


def optimal_classical_state(c):
    """M(rho) = 1/4 (I (x) I + c_j sigma_j (x) sigma_j) for the optimal axis j."""
    c = require_physical(c)
    _, axis = q_g_closed(c)
    kept = np.zeros(3)
    kept[axis - 1] = c[axis - 1]
    return bell_density(kept)


def c_g_direct(c):
    """C_G = ||M(rho) - M(pi_rho)||_1 from matrices, using the measured state itself."""
    c = require_physical(c)
    rho = bell_density(c)
    n = optimal_direction(c)
    m_rho = apply_measurement(rho, n)
    m_pi = apply_measurement(product_of_marginals(rho), n)
    return trace_norm(m_rho - m_pi)


def t_g_matrix(c):
    """T_G = ||rho - pi_rho||_1 from matrices."""
    c = require_physical(c)
    rho = bell_density(c)
    return trace_norm(rho - product_of_marginals(rho))


def geometric_triple(c):
    q, axis = q_g_closed(c)
    return GeometricTriple(q, c_g_closed(c), t_g_closed(c), axis)


def check_report(ent, geo, tol=1e-10):
    """Raise :class:`InvariantViolation` unless the six measures satisfy their relations."""
    q_g, c_g, t_g, _ = geo
    q_e, c_e, t_e = ent
    checks = [
        ("Q_G <= C_G", q_g <= c_g + tol),
        ("C_G <= T_G", c_g <= t_g + tol),
        ("T_G <= C_G + Q_G", t_g <= c_g + q_g + tol),
        ("C_G + Q_G <= 2 T_G", c_g + q_g <= 2 * t_g + tol),
        ("T_G <= 1.5", t_g <= T_G_MAX + tol),
        ("T_E = C_E + Q_E", abs(t_e - c_e - q_e) <= tol),
        ("Q_G >= Q_E", q_g >= q_e - 1e-8),
        ("C_G >= C_E", c_g >= c_e - 1e-8),
        ("T_E >= C_E, Q_E", t_e >= max(c_e, q_e) - tol),
        ("measures nonnegative", min(q_g, c_g, t_g, c_e, t_e) >= -tol and q_e >= -tol),
    ]
    failed = [name for name, ok in checks if not ok]
    if failed:
        raise InvariantViolation("report violates: " + "; ".join(failed))


def analyze(c, verify=False):
    """All six correlation measures for one Bell-diagonal state.

    Args:
        c: correlation vector (c1, c2, c3).
        verify: also evaluate the matrix-level counterparts of Q_G, C_G and T_G
            and require agreement with the closed forms.

    Raises:
        UnphysicalStateError: naming the negative lambda_ij.
        InvariantViolation: if a relation between measures fails, or, with
            ``verify``, a closed form disagrees with its matrix path.
    """
    c = require_physical(np.asarray(c, dtype=float).reshape(3))
    ent = entropic.entropic_triple(c)
    geo = geometric_triple(c)
    check_report(ent, geo)
    if verify:
        direct = {
            "Q_G": q_g_direct_at(c, optimal_direction(c)),
            "C_G": c_g_direct(c),
            "T_G": t_g_matrix(c),
        }
        closed = {"Q_G": geo.q_g, "C_G": geo.c_g, "T_G": geo.t_g}
        for name, value in direct.items():
            if abs(value - closed[name]) > DUAL_PATH_TOL:
                raise InvariantViolation(
                    f"{name}: closed form {closed[name]!r} != matrix path {value!r}"
                )
    return CorrelationReport(
        c=tuple(float(x) for x in c),
        entropic=ent,
        geometric=geo,
        spectrum=tuple(float(x) for x in spectrum_bell(c)),
    )
