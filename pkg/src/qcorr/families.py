"""One-parameter families of Bell-diagonal states and sweep helpers.

* ``su2``: c = (x, x, x), physical for x in [-1, 1/3].
* ``u1``: c = (x, -x, 0.9), physical for |x| <= 0.95.
* ``custom-line``: c = start + x (end - start) for x in [0, 1].
"""

import numpy as np
from scipy.optimize import brentq

from qcorr import entropic
from qcorr import geometric as geo
from qcorr.core import is_physical

DOMAINS = {"su2": (-1.0, 1.0 / 3.0), "u1": (-0.95, 0.95), "custom-line": (0.0, 1.0)}
U1_C3 = 0.9
DOMAIN_TOL = 1e-12
MEASURES = ("QE", "CE", "TE", "QG", "CG", "TG")


def family_points(family, xs, start=None, end=None):
    """Correlation vectors of ``family`` at parameters ``xs``; shape (len(xs), 3)."""
    xs = np.asarray(xs, dtype=float)
    if family == "su2":
        return np.stack([xs, xs, xs], axis=-1)
    if family == "u1":
        return np.stack([xs, -xs, np.full_like(xs, U1_C3)], axis=-1)
    if family == "custom-line":
        if start is None or end is None:
            raise ValueError("custom-line needs start and end vectors")
        start, end = np.asarray(start, dtype=float), np.asarray(end, dtype=float)
        return start + xs[:, None] * (end - start)
    raise ValueError(f"unknown family {family!r}")


def check_range(family, lo, hi):
    d_lo, d_hi = DOMAINS[family]
    if lo > hi:
        raise ValueError(f"empty range [{lo}, {hi}]")
    if lo < d_lo - DOMAIN_TOL or hi > d_hi + DOMAIN_TOL:
        raise ValueError(f"range [{lo}, {hi}] leaves the {family} domain [{d_lo:.6g}, {d_hi:.6g}]")


def grid(lo, hi, steps):
    """Endpoint-inclusive grid; a single point is allowed only when lo == hi."""
    if steps == 1 and lo == hi:
        return np.array([float(lo)])
    if steps < 2:
        raise ValueError("a sweep needs at least 2 steps")
    return np.linspace(lo, hi, steps)


def sweep_family(family, lo, hi, steps, start=None, end=None):
    """One row dict per grid point, with ``physical`` False and measures None off the tetrahedron."""
    check_range(family, lo, hi)
    xs = grid(lo, hi, steps)
    rows = []
    for x, c in zip(xs, family_points(family, xs, start, end)):
        row = {"x": float(x), "c1": float(c[0]), "c2": float(c[1]), "c3": float(c[2])}
        row["physical"] = bool(is_physical(c))
        if row["physical"]:
            report = geo.analyze(c).as_dict()
            row.update({k: float(report[k]) for k in MEASURES})
        else:
            row.update({k: None for k in MEASURES})
        rows.append(row)
    return rows


def kinks(x, y, threshold=None):
    """Locations of slope discontinuities from the discrete second difference.

    A point is flagged when |y[i-1] - 2 y[i] + y[i+1]| exceeds ``threshold``
    (default a quarter of the grid step, i.e. a slope jump of order one).
    Adjacent flagged points merge into one kink placed at the largest spike.
    """
    x, y = np.asarray(x, dtype=float), np.asarray(y, dtype=float)
    if len(x) < 3:
        return []
    step = float(np.min(np.diff(x)))
    threshold = 0.25 * step if threshold is None else threshold
    d2 = np.abs(y[:-2] - 2 * y[1:-1] + y[2:])
    flagged = np.flatnonzero(d2 > threshold) + 1
    out, group = [], []
    for i in flagged:
        if group and i - group[-1] > 1:
            out.append(max(group, key=lambda k: d2[k - 1]))
            group = []
        group.append(i)
    if group:
        out.append(max(group, key=lambda k: d2[k - 1]))
    return [float(x[i]) for i in out]


def su2_total_gap(x):
    """T_E - T_G on the su2 family."""
    c = family_points("su2", [x])[0]
    return entropic.t_e_closed(c) - geo.t_g_closed(c)


def su2_crossing(lo=-1.0, hi=-0.8, xtol=1e-9):
    """The unique zero of T_E - T_G on (lo, hi) for the su2 family."""
    return brentq(su2_total_gap, lo, hi, xtol=xtol)
