"""Brute-force checks of the geometric closed forms.

Two independent routes to Q_G:

* ``brute_force_qg`` minimizes 2 (gamma_- + gamma_+) over the probability
  simplex of squared directions.
* ``brute_force_qg_spectral`` minimizes tr|rho - M_n(rho)| over a sphere
  grid of directions using only the measurement map and the eigensolver,
  so a mistake in the gamma formula cannot confirm itself.

The remaining functions turn the vertex-minimality argument for
f(u) = gamma_-(u) + gamma_+(u) into numerical checks.
"""

from dataclasses import dataclass
from enum import Enum

import numpy as np

from qcorr import entropic
from qcorr import geometric as geo
from qcorr.core import (
    CorrelationVector,
    apply_measurement,
    bell_density,
    require_physical,
    sample_physical,
    trace_norm,
)
from qcorr.search import minimize_on_simplex, minimize_on_sphere, simplex_grid

SIMPLEX_ORACLE_TOL = 1e-6
SPECTRAL_ORACLE_TOL = 1e-5
SPHERE_RESOLUTION = 18
VERTEX_TOL = 1e-9
WITNESS_MARGIN = 1e-6
VERTICES = np.eye(3)


@dataclass(frozen=True)
class SimplexGrid:
    resolution: int
    points: np.ndarray

    @classmethod
    def build(cls, resolution):
        return cls(resolution, simplex_grid(resolution))


@dataclass(frozen=True)
class OracleVerdict:
    closed_form_value: float
    oracle_value: float
    gap: float
    witness_u: tuple
    passed: bool
    witness_n: tuple = None


@dataclass(frozen=True)
class StationarityResult:
    """Left-hand sides of the stationarity conditions for m = j+1, j+2.

    ``status`` is ``"ok"`` when the residuals were evaluated, otherwise
    ``"non_interior"`` (u touches the simplex boundary) or
    ``"condition_violated"`` (gamma_-, gamma_+ or beta.u vanish, so the
    condition cannot hold at u).
    """

    status: str
    residuals: tuple = None


class Relation(str, Enum):
    TG_LT_TE = "TG_lt_TE"
    QE_GT_CE = "QE_gt_CE"


def f_objective(c, u):
    """gamma_-(u) + gamma_+(u); the trace distance to M_n(rho) is twice this."""
    g_minus, g_plus = geo.gamma_pair(c, u)
    return g_minus + g_plus


def brute_force_qg(c, resolution=100):
    """Minimize 2 f over a simplex grid plus three local refinement rounds."""
    if resolution < 50:
        raise ValueError("resolution must be >= 50")
    c = require_physical(c)
    closed, _ = geo.q_g_closed(c)
    best = minimize_on_simplex(lambda u: 2.0 * f_objective(c, u), resolution)
    gap = best.value - closed
    return OracleVerdict(
        closed_form_value=closed,
        oracle_value=best.value,
        gap=gap,
        witness_u=tuple(float(x) for x in best.point),
        passed=abs(gap) <= SIMPLEX_ORACLE_TOL,
    )


def brute_force_qg_spectral(c, sphere_resolution=SPHERE_RESOLUTION):
    """Minimize tr|rho - M_n(rho)| over directions n using only matrices."""
    c = require_physical(c)
    closed, _ = geo.q_g_closed(c)
    rho = bell_density(c)
    best = minimize_on_sphere(
        lambda n: trace_norm(rho - apply_measurement(rho, n)), sphere_resolution
    )
    gap = best.value - closed
    n = best.point
    return OracleVerdict(
        closed_form_value=closed,
        oracle_value=best.value,
        gap=gap,
        witness_u=tuple(float(x) for x in n**2),
        passed=abs(gap) <= SPECTRAL_ORACLE_TOL,
        witness_n=tuple(float(x) for x in n),
    )


def stationarity_residual(c, u, j, interior_tol=1e-6, degenerate_tol=1e-10):
    """Residuals of the Lagrange stationarity condition fixing lambda = d f / d u_j.

    For m, n the two axes other than j (1-based, cyclic), returns

        (alpha_m - alpha_j) [ (1 - alpha_n / sqrt(b)) / gamma_- + (1 + alpha_n / sqrt(b)) / gamma_+ ]

    with b = beta . u, which equals -32 (d f / d u_m - d f / d u_j).
    """
    c = np.asarray(c, dtype=float)
    u = np.asarray(u, dtype=float)
    if j not in (1, 2, 3):
        raise ValueError("axis index j must be 1, 2 or 3")
    if np.any(u <= interior_tol):
        return StationarityResult("non_interior")
    alpha = c**2
    beta = np.array([alpha[1] * alpha[2], alpha[0] * alpha[2], alpha[0] * alpha[1]])
    jj = j - 1
    others = [(jj + 1) % 3, (jj + 2) % 3]
    prefactors = [alpha[m] - alpha[jj] for m in others]
    if all(p == 0.0 for p in prefactors):
        return StationarityResult("ok", (0.0, 0.0))
    b_u = float(beta @ u)
    g_minus, g_plus = geo.gamma_pair(c, u)
    if min(g_minus, g_plus, b_u) <= degenerate_tol:
        return StationarityResult("condition_violated")
    root = np.sqrt(b_u)
    out = []
    for m, pre in zip(others, prefactors):
        n = others[1] if m == others[0] else others[0]
        bracket = (1.0 - alpha[n] / root) / g_minus + (1.0 + alpha[n] / root) / g_plus
        out.append(float(pre * bracket))
    return StationarityResult("ok", tuple(out))


def vertex_minimality_check(c, resolution=60):
    """True iff no simplex grid point beats the best vertex by more than 1e-9."""
    c = require_physical(c)
    grid = simplex_grid(resolution)
    grid_min = float(np.min(f_objective(c, grid)))
    vertex_min = float(np.min(f_objective(c, VERTICES)))
    return grid_min >= vertex_min - VERTEX_TOL


def _relation_margin(relation, cs):
    ent_t = entropic.t_e_closed(cs)
    if relation == Relation.TG_LT_TE:
        return ent_t - geo.t_g_closed(cs)
    c_e = entropic.c_e_closed(cs)
    return (ent_t - c_e) - c_e


def counterexample_search(relation, seed, budget):
    """First sampled physical state that strictly satisfies ``relation`` (margin > 1e-6).

    Returns:
        A :class:`CorrelationVector`, or ``None`` if ``budget`` samples were
        exhausted without a witness.
    """
    relation = Relation(relation)
    if budget < 1:
        raise ValueError("budget must be >= 1")
    cs = sample_physical(seed, budget)
    hits = np.flatnonzero(_relation_margin(relation, cs) > WITNESS_MARGIN)
    if len(hits) == 0:
        return None
    return CorrelationVector(*(float(x) for x in cs[hits[0]]))
