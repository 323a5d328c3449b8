"""State algebra for two-qubit Bell-diagonal systems.

Conventions: computational basis |00>, |01>, |10>, |11>; sigma_1, sigma_2,
sigma_3 are sigma_x, sigma_y, sigma_z; the first tensor factor is party a,
the one that gets measured.

Most functions broadcast over leading axes, so ``c`` may be a single
3-vector or an ``(N, 3)`` array of them.
"""

from typing import NamedTuple

import numpy as np

from qcorr.jacobi import ConvergenceError, jacobi_eigh

__all__ = [
    "ConvergenceError",
    "CorrelationVector",
    "MeasurementDirection",
    "NotHermitianError",
    "OrderedMagnitudes",
    "UnphysicalStateError",
    "PAULI",
    "apply_measurement",
    "bell_density",
    "hermitian_eigenvalues",
    "is_physical",
    "order_magnitudes",
    "product_of_marginals",
    "require_physical",
    "sample_physical",
    "spectrum_bell",
    "trace_norm",
]

PHYSICAL_TOL = 1e-12
HERMITIAN_TOL = 1e-12
UNIT_TOL = 1e-12
ZERO_EIG = 1e-12

I2 = np.eye(2, dtype=complex)
SX = np.array([[0, 1], [1, 0]], dtype=complex)
SY = np.array([[0, -1j], [1j, 0]], dtype=complex)
SZ = np.array([[1, 0], [0, -1]], dtype=complex)
PAULI = np.stack([SX, SY, SZ])
# sigma_i (x) sigma_i for i = 1, 2, 3
_SS = np.stack([np.kron(s, s) for s in PAULI])

# Labels (i, j) for the eigenvalues lambda_ij, in the order spectrum_bell returns them.
SPECTRUM_LABELS = ((0, 0), (0, 1), (1, 0), (1, 1))
_SIGNS = np.array(
    [[(-1) ** i, -((-1) ** (i + j)), (-1) ** j] for i, j in SPECTRUM_LABELS], dtype=float
)

# Vertices of the physical tetrahedron (the four Bell projectors).
TETRAHEDRON = np.array([[1, -1, 1], [-1, 1, 1], [1, 1, -1], [-1, -1, -1]], dtype=float)


class UnphysicalStateError(ValueError):
    """A correlation vector outside the tetrahedron of valid Bell-diagonal states."""

    def __init__(self, c, spectrum):
        self.c = tuple(float(x) for x in c)
        self.spectrum = tuple(float(x) for x in spectrum)
        k = int(np.argmin(spectrum))
        i, j = SPECTRUM_LABELS[k]
        self.label = f"lambda_{i}{j}"
        self.value = self.spectrum[k]
        super().__init__(
            "unphysical correlation vector ({}): {} = {:.6g}".format(
                ", ".join(f"{x:.6g}" for x in self.c), self.label, self.value
            )
        )


class NotHermitianError(ValueError):
    pass


class CorrelationVector(NamedTuple):
    """Correlation functions c_i = <sigma_i (x) sigma_i> of a Bell-diagonal state."""

    c1: float
    c2: float
    c3: float


class MeasurementDirection(NamedTuple):
    n1: float
    n2: float
    n3: float

    @property
    def u(self):
        """Squared components, a point on the probability simplex."""
        return np.array([self.n1, self.n2, self.n3]) ** 2


class OrderedMagnitudes(NamedTuple):
    """Sorted |c_i| and the (1-based) axis holding the largest one."""

    c_plus: float
    c_mid: float
    c_minus: float
    axis: int


def _as_c(c):
    c = np.asarray(c, dtype=float)
    if c.shape[-1] != 3:
        raise ValueError(f"correlation vector must have 3 components, got shape {c.shape}")
    return c


def bell_density(c):
    """Density operator 1/4 [I (x) I + sum_i c_i sigma_i (x) sigma_i].

    Unphysical ``c`` is accepted; gate on :func:`is_physical` if needed.
    """
    c = _as_c(c)
    return (np.eye(4) + np.tensordot(c, _SS, axes=([-1], [0]))) / 4.0


def spectrum_bell(c):
    """Eigenvalues (lambda_00, lambda_01, lambda_10, lambda_11) of ``bell_density(c)``."""
    c = _as_c(c)
    return (1.0 + c @ _SIGNS.T) / 4.0


def is_physical(c, tol=PHYSICAL_TOL):
    return np.min(spectrum_bell(c), axis=-1) >= -tol


def require_physical(c, tol=PHYSICAL_TOL):
    """Raise :class:`UnphysicalStateError` naming the worst eigenvalue if ``c`` is unphysical."""
    c = _as_c(c)
    lam = spectrum_bell(c)
    bad = np.min(lam, axis=-1) < -tol
    if np.any(bad):
        flat_c = c.reshape(-1, 3)
        flat_lam = lam.reshape(-1, 4)
        k = int(np.argmax(bad.reshape(-1)))
        raise UnphysicalStateError(flat_c[k], flat_lam[k])
    return c


def order_magnitudes(c):
    """Descending (c_plus, c_mid, c_minus) of |c_i| plus the axis j with |c_j| = c_plus.

    Ties go to the smallest axis index. Broadcasts over leading axes.
    """
    mags = np.abs(_as_c(c))
    ordered = -np.sort(-mags, axis=-1)
    axis = np.argmax(mags, axis=-1) + 1
    if ordered.ndim == 1:
        return OrderedMagnitudes(
            float(ordered[0]), float(ordered[1]), float(ordered[2]), int(axis)
        )
    return OrderedMagnitudes(ordered[..., 0], ordered[..., 1], ordered[..., 2], axis)


def check_hermitian(a, tol=HERMITIAN_TOL):
    a = np.asarray(a)
    if a.shape[-1] != a.shape[-2]:
        raise NotHermitianError(f"expected square matrices, got shape {a.shape}")
    dev = np.max(np.abs(a - np.conj(np.swapaxes(a, -1, -2))), initial=0.0)
    if dev > tol:
        raise NotHermitianError(f"matrix is not Hermitian (max deviation {dev:.3g})")
    return a


def hermitian_eigenvalues(a, vectors=False):
    """Ascending real spectrum of Hermitian matrices via cyclic Jacobi.

    Accepts a single matrix or a stack. With ``vectors=True`` also returns
    the eigenvectors as columns.
    """
    a = check_hermitian(a)
    return jacobi_eigh(a, vectors=vectors)


def trace_norm(a):
    """Schatten 1-norm of Hermitian matrices; eigenvalues below 1e-12 count as zero."""
    w = np.abs(hermitian_eigenvalues(a))
    w = np.where(w < ZERO_EIG, 0.0, w)
    total = np.sum(w, axis=-1)
    return float(total) if np.ndim(total) == 0 else total


def _projectors(n):
    n = np.asarray(n, dtype=float)
    norm = np.linalg.norm(n, axis=-1)
    if np.any(np.abs(norm - 1.0) > UNIT_TOL):
        raise ValueError(f"measurement direction must be a unit vector (norm {np.max(norm)!r})")
    ns = np.tensordot(n, PAULI, axes=([-1], [0]))
    return (I2 + ns) / 2.0, (I2 - ns) / 2.0


def apply_measurement(rho, n):
    """Project party a along ``n``: sum_k (Pi_k (x) I) rho (Pi_k (x) I), Pi_pm = (I pm n.sigma)/2.

    ``rho`` and ``n`` broadcast against each other, so one state can be
    measured along a whole grid of directions.
    """
    rho = np.asarray(rho, dtype=complex)
    out = 0
    for proj in _projectors(n):
        big = np.kron(proj, I2) if proj.ndim == 2 else _batched_kron_i2(proj)
        out = out + big @ rho @ big
    return out


def _batched_kron_i2(p):
    out = np.zeros(p.shape[:-2] + (4, 4), dtype=complex)
    out[..., 0::2, 0::2] = p
    out[..., 1::2, 1::2] = p
    return out


def partial_traces(rho):
    """Return (rho_a, rho_b) of two-qubit operators."""
    r = np.asarray(rho).reshape(np.shape(rho)[:-2] + (2, 2, 2, 2))
    rho_a = np.einsum("...ijkj->...ik", r)
    rho_b = np.einsum("...ijil->...jl", r)
    return rho_a, rho_b


def product_of_marginals(rho):
    """tr_b(rho) (x) tr_a(rho)."""
    rho_a, rho_b = partial_traces(rho)
    out = rho_a[..., :, None, :, None] * rho_b[..., None, :, None, :]
    return out.reshape(np.shape(rho))


def sample_physical(seed, count, return_acceptance=False):
    """Draw ``count`` correlation vectors uniformly from the physical tetrahedron.

    Rejection sampling from the cube [-1, 1]^3 (acceptance ~ 1/3) with a
    PCG64 stream seeded by ``seed``; the output depends only on
    ``(seed, count)``.

    Returns:
        ``(count, 3)`` array, and the acceptance ratio of the rejection loop
        when ``return_acceptance`` is set.
    """
    if count < 1:
        raise ValueError("count must be >= 1")
    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed)))
    chunks = []
    accepted = drawn = 0
    while accepted < count:
        batch = max(64, int(1.1 * 3 * (count - accepted)))
        x = rng.uniform(-1.0, 1.0, size=(batch, 3))
        keep = x[is_physical(x)]
        drawn += batch
        accepted += len(keep)
        chunks.append(keep)
    samples = np.concatenate(chunks)[:count]
    if return_acceptance:
        return samples, accepted / drawn
    return samples


def spawn_seeds(seed, n):
    """Independent child seeds for ``n`` workers, derived from one root seed."""
    return [
        int(s.generate_state(1, np.uint64)[0])
        for s in np.random.SeedSequence(seed).spawn(n)
    ]
