"""Cyclic Jacobi eigensolver for small dense Hermitian matrices.

Works on a single ``(n, n)`` matrix or on a stack ``(..., n, n)``; every
matrix in the stack is rotated in lockstep, which keeps the pure-numpy
implementation fast enough for sweeps over tens of thousands of 4x4
operators.
"""

import numpy as np

OFF_TOL = 1e-13
MAX_SWEEPS = 100


class ConvergenceError(RuntimeError):
    """Raised when the Jacobi sweeps fail to annihilate the off-diagonal part."""


def _off_norm(a):
    n = a.shape[-1]
    off = np.abs(a) ** 2
    off[..., np.arange(n), np.arange(n)] = 0.0
    return np.sqrt(np.sum(off, axis=(-2, -1)))


def jacobi_eigh(a, vectors=False, tol=OFF_TOL, max_sweeps=MAX_SWEEPS):
    """Eigen-decompose Hermitian matrices by cyclic complex Jacobi rotations.

    Args:
        a: array of shape ``(..., n, n)``, assumed Hermitian.
        vectors: also accumulate and return the eigenvectors (as columns).
        tol: convergence threshold on the off-diagonal Frobenius norm, scaled
            by ``max(1, ||a||_F)``.
        max_sweeps: sweep budget before giving up.

    Returns:
        Ascending eigenvalues of shape ``(..., n)``, plus the unitary of
        eigenvectors of shape ``(..., n, n)`` when ``vectors`` is set.

    Raises:
        ConvergenceError: if any matrix is still non-diagonal after
            ``max_sweeps`` sweeps.
    """
    a = np.array(a, dtype=complex, copy=True)
    n = a.shape[-1]
    batch = a.shape[:-2]
    a = a.reshape((-1, n, n))
    v = np.broadcast_to(np.eye(n, dtype=complex), a.shape).copy() if vectors else None

    scale = np.maximum(1.0, np.sqrt(np.sum(np.abs(a) ** 2, axis=(-2, -1))))
    threshold = tol * scale

    for _ in range(max_sweeps + 1):
        active = _off_norm(a) >= threshold
        if not active.any():
            break
        idx = np.nonzero(active)[0]
        sub = a[idx]
        vsub = v[idx] if vectors else None
        for p in range(n - 1):
            for q in range(p + 1, n):
                _rotate(sub, vsub, p, q)
        a[idx] = sub
        if vectors:
            v[idx] = vsub
    else:
        bad = int(np.count_nonzero(_off_norm(a) >= threshold))
        raise ConvergenceError(
            f"Jacobi did not converge after {max_sweeps} sweeps "
            f"({bad} of {a.shape[0]} matrices unconverged)"
        )

    w = np.real(np.diagonal(a, axis1=-2, axis2=-1))
    order = np.argsort(w, axis=-1, kind="stable")
    w = np.take_along_axis(w, order, axis=-1).reshape(batch + (n,))
    if not vectors:
        return w
    v = np.take_along_axis(v, order[:, None, :], axis=-1).reshape(batch + (n, n))
    return w, v


def _rotate(a, v, p, q):
    # Zero a[:, p, q] for every matrix in the stack, in place.
    app = a[:, p, p].real
    aqq = a[:, q, q].real
    z = a[:, p, q]
    r = np.abs(z)
    live = r > 1e-300
    safe_r = np.where(live, r, 1.0)
    phase = np.where(live, z / safe_r, 1.0)

    with np.errstate(over="ignore"):
        theta = (aqq - app) / (2.0 * safe_r)
    sign = np.where(theta >= 0.0, 1.0, -1.0)
    # hypot avoids overflow of theta**2; an infinite theta gives t = 0
    t = sign / (np.abs(theta) + np.hypot(theta, 1.0))
    t = np.where(live, t, 0.0)
    c = 1.0 / np.sqrt(t * t + 1.0)
    s = t * c

    # U = diag(1, conj(phase)) @ [[c, s], [-s, c]] acting on columns p, q.
    ph_c = np.conj(phase)
    u_pp = c[:, None]
    u_pq = s[:, None]
    u_qp = (-s * ph_c)[:, None]
    u_qq = (c * ph_c)[:, None]

    col_p = a[:, :, p].copy()
    col_q = a[:, :, q].copy()
    a[:, :, p] = col_p * u_pp + col_q * u_qp
    a[:, :, q] = col_p * u_pq + col_q * u_qq

    row_p = a[:, p, :].copy()
    row_q = a[:, q, :].copy()
    a[:, p, :] = row_p * np.conj(u_pp) + row_q * np.conj(u_qp)
    a[:, q, :] = row_p * np.conj(u_pq) + row_q * np.conj(u_qq)
    a[:, p, q] = 0.0
    a[:, q, p] = 0.0

    if v is not None:
        col_p = v[:, :, p].copy()
        col_q = v[:, :, q].copy()
        v[:, :, p] = col_p * u_pp + col_q * u_qp
        v[:, :, q] = col_p * u_pq + col_q * u_qq
