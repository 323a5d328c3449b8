"""Grid-plus-refinement minimizers on the probability simplex and the unit sphere.

Both minimizers evaluate a vectorized objective on a coarse grid that
contains the special points (simplex vertices, coordinate axes), then
zoom in around the incumbent with small square patches whose half-width
shrinks by ``shrink`` each round. Reductions use ``argmin``, which keeps
the first minimum, so results are deterministic.
"""

from dataclasses import dataclass

import numpy as np

ROUNDS = 3
SHRINK = 10
PATCH = 11


@dataclass(frozen=True)
class SearchResult:
    value: float
    point: np.ndarray
    evaluations: int


def simplex_grid(resolution):
    """All u = (i, j, k) / (resolution - 1) with i + j + k = resolution - 1.

    ``resolution`` is the number of points per edge; the three vertices are
    always included exactly.
    """
    if resolution < 2:
        raise ValueError("resolution must be >= 2")
    m = resolution - 1
    i, j = np.meshgrid(np.arange(m + 1), np.arange(m + 1), indexing="ij")
    keep = i + j <= m
    i, j = i[keep], j[keep]
    k = m - i - j
    return np.stack([i, j, k], axis=-1) / m


def _simplex_patch(center, half_width, patch):
    offsets = np.linspace(-half_width, half_width, patch)
    d1, d2 = np.meshgrid(offsets, offsets, indexing="ij")
    u1 = center[0] + d1.ravel()
    u2 = center[1] + d2.ravel()
    u3 = 1.0 - u1 - u2
    pts = np.stack([u1, u2, u3], axis=-1)
    inside = np.all(pts >= 0.0, axis=-1)
    return pts[inside]


def minimize_on_simplex(fun, resolution, rounds=ROUNDS, shrink=SHRINK, patch=PATCH):
    """Minimize ``fun`` (maps ``(M, 3)`` simplex points to ``(M,)`` values) over the simplex."""
    grid = simplex_grid(resolution)
    values = np.asarray(fun(grid), dtype=float)
    k = int(np.argmin(values))
    best_val, best_pt = float(values[k]), grid[k]
    evaluations = len(grid)
    half_width = 1.0 / (resolution - 1)
    for _ in range(rounds):
        pts = _simplex_patch(best_pt, half_width, patch)
        vals = np.asarray(fun(pts), dtype=float)
        evaluations += len(pts)
        k = int(np.argmin(vals))
        if vals[k] < best_val:
            best_val, best_pt = float(vals[k]), pts[k]
        half_width /= shrink
    return SearchResult(best_val, best_pt, evaluations)


def angles_to_vectors(theta, phi):
    theta = np.asarray(theta, dtype=float)
    phi = np.asarray(phi, dtype=float)
    st = np.sin(theta)
    return np.stack([st * np.cos(phi), st * np.sin(phi), np.cos(theta)], axis=-1)


def _clean(n):
    # Exact zeros at the axes keep grid points such as (1, 0, 0) exactly unit.
    n = np.where(np.abs(n) < 1e-15, 0.0, n)
    return n / np.linalg.norm(n, axis=-1, keepdims=True)


def sphere_grid(resolution):
    """Latitude/longitude grid over the upper hemisphere.

    ``resolution`` latitude steps from the pole to the equator and
    ``4 * resolution`` longitudes, so every coordinate axis is a grid point.

    Returns:
        ``(theta, phi, n)`` flat arrays, ``n`` of shape ``(M, 3)``.
    """
    if resolution < 1:
        raise ValueError("resolution must be >= 1")
    dtheta = np.pi / 2 / resolution
    thetas = np.arange(resolution + 1) * dtheta
    phis = np.arange(4 * resolution) * dtheta
    th, ph = np.meshgrid(thetas[1:], phis, indexing="ij")
    theta = np.concatenate([[0.0], th.ravel()])
    phi = np.concatenate([[0.0], ph.ravel()])
    return theta, phi, _clean(angles_to_vectors(theta, phi))


def canonical_direction(n):
    """Flip ``n`` into the upper hemisphere; Pi_+ and Pi_- merely swap under n -> -n."""
    n = np.asarray(n, dtype=float)
    nz = np.flatnonzero(np.abs(n) > 1e-15)
    if len(nz) and n[nz[-1]] < 0:
        n = -n
    return n


def minimize_on_sphere(fun, resolution, rounds=ROUNDS, shrink=SHRINK, patch=PATCH):
    """Minimize ``fun`` (maps ``(M, 3)`` unit vectors to ``(M,)`` values) over directions."""
    theta, phi, grid = sphere_grid(resolution)
    values = np.asarray(fun(grid), dtype=float)
    k = int(np.argmin(values))
    best_val = float(values[k])
    best_t, best_p, best_n = theta[k], phi[k], grid[k]
    evaluations = len(grid)
    half_width = np.pi / 2 / resolution
    offsets = np.linspace(-1.0, 1.0, patch)
    for _ in range(rounds):
        dt, dp = np.meshgrid(offsets * half_width, offsets * half_width, indexing="ij")
        t = best_t + dt.ravel()
        p = best_p + dp.ravel()
        pts = _clean(angles_to_vectors(t, p))
        vals = np.asarray(fun(pts), dtype=float)
        evaluations += len(pts)
        k = int(np.argmin(vals))
        if vals[k] < best_val:
            best_val, best_t, best_p, best_n = float(vals[k]), t[k], p[k], pts[k]
        half_width /= shrink
    return SearchResult(best_val, canonical_direction(best_n), evaluations)
