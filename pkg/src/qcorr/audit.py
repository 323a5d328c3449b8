"""Randomized audits of every relation between the six correlation measures.

Each suite returns a dict ``{checked, failed, first_failure_state,
max_violation}``. Everything derives from one seed, so repeated runs
produce identical reports.
"""

import numpy as np

from qcorr import entropic
from qcorr import geometric as geo
from qcorr import oracle
from qcorr.core import is_physical, sample_physical

TIGHT = 1e-10
LOOSE = 1e-8
LINK_TOL = 1e-12
COUNTEREXAMPLE_BUDGET = 10_000


def _suite(states, violation, tol):
    """Summarize a per-state violation measure; a state fails when it exceeds ``tol``."""
    violation = np.asarray(violation, dtype=float)
    bad = np.flatnonzero(violation > tol)
    return {
        "checked": int(len(violation)),
        "failed": int(len(bad)),
        "first_failure_state": [float(x) for x in states[bad[0]]] if len(bad) else None,
        "max_violation": float(max(0.0, violation.max())) if len(violation) else 0.0,
    }


def tie_conditioned(seed, count):
    """Physical states with two equal |c_i| (signs kept), for the degenerate branches."""
    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence([seed, 1])))
    out = []
    while len(out) < count:
        c = sample_physical(int(rng.integers(2**32)), 1)[0]
        i, k = rng.choice(3, size=2, replace=False)
        c[k] = np.copysign(abs(c[i]), c[k])
        if is_physical(c):
            out.append(c)
    return np.array(out)


def classical_quantum(states):
    """Keep only the largest-magnitude component of each state: Q_G = 0 exactly."""
    axis = np.argmax(np.abs(states), axis=-1)
    out = np.zeros_like(states)
    rows = np.arange(len(states))
    out[rows, axis] = states[rows, axis]
    return out


def relation_suites(cs):
    q_g, _ = geo.q_g_closed(cs)
    c_g = geo.c_g_closed(cs)
    t_g = geo.t_g_closed(cs)
    t_e = entropic.t_e_closed(cs)
    c_e = entropic.c_e_closed(cs)
    q_e = entropic.q_e_closed(cs)

    cq = classical_quantum(cs)
    cq_gap = np.abs(geo.t_g_closed(cq) - geo.c_g_closed(cq) - geo.q_g_closed(cq)[0])
    # Off the classical-quantum set the inequality must be strict.
    strict = np.where(q_g >= TIGHT, TIGHT - (c_g + q_g - t_g), 0.0)

    return {
        "t_g_dual_path": _suite(cs, np.abs(t_g - geo.t_g_direct(cs)), TIGHT),
        "superadditivity_lower": _suite(cs, t_g - (c_g + q_g), TIGHT),
        "superadditivity_upper": _suite(cs, (c_g + q_g) - 2 * t_g, TIGHT),
        "superadditivity_equality_cq": _suite(cq, cq_gap, TIGHT),
        "superadditivity_strict": _suite(cs, strict, 0.0),
        "entropic_additivity": _suite(cs, np.abs(t_e - c_e - q_e), TIGHT),
        "hierarchy_QG_ge_QE": _suite(cs, q_e - q_g, LOOSE),
        "hierarchy_CG_ge_CE": _suite(cs, c_e - c_g, LOOSE),
        "hierarchy_TE_ge_CE_QE": _suite(cs, np.maximum(c_e, q_e) - t_e, TIGHT),
        "hierarchy_TG_ge_CG_QG": _suite(cs, np.maximum(c_g, q_g) - t_g, TIGHT),
        "hierarchy_CG_ge_QG": _suite(cs, q_g - c_g, TIGHT),
        "monotone_link": _suite(cs, np.abs(c_e - entropic.c_e_from_c_g(c_g)), LINK_TOL),
    }


def oracle_suites(cs, ties):
    simplex = [oracle.brute_force_qg(c) for c in cs]
    spectral = [oracle.brute_force_qg_spectral(c) for c in cs]
    vertex_states = np.concatenate([cs, ties])
    vertex_ok = np.array([oracle.vertex_minimality_check(c) for c in vertex_states])
    return {
        "oracle_simplex": _suite(cs, [abs(v.gap) for v in simplex], oracle.SIMPLEX_ORACLE_TOL),
        "oracle_spectral": _suite(cs, [abs(v.gap) for v in spectral], oracle.SPECTRAL_ORACLE_TOL),
        "vertex_minimality": _suite(vertex_states, (~vertex_ok).astype(float), 0.5),
    }


def counterexample_suites(seed, budget=COUNTEREXAMPLE_BUDGET):
    out = {}
    for relation in oracle.Relation:
        witness = oracle.counterexample_search(relation, seed, budget)
        out[f"counterexample_{relation.value}"] = {
            "checked": budget,
            "failed": 0 if witness is not None else 1,
            "first_failure_state": None,
            "max_violation": 0.0,
            "witness": list(witness) if witness is not None else None,
        }
    return out


def run_verification(seed, count):
    """Run all suites: relations on ``count`` states, oracles on ``count // 100``."""
    if count < 1:
        raise ValueError("count must be >= 1")
    cs = sample_physical(seed, count)
    n_oracle = max(1, count // 100)
    n_ties = max(1, n_oracle // 10)
    suites = relation_suites(cs)
    suites.update(oracle_suites(cs[:n_oracle], tie_conditioned(seed, n_ties)))
    suites.update(counterexample_suites(seed))
    return {
        "seed": seed,
        "count": count,
        "passed": all(s["failed"] == 0 for s in suites.values()),
        "suites": suites,
    }
