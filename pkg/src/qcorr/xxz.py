"""Exact diagonalization of the periodic XXZ ring

    H = -(J/2) sum_i (sx_i sx_{i+1} + sy_i sy_{i+1} + Delta sz_i sz_{i+1})

and the nearest-neighbour two-spin state of its ground space.

Basis states are integers whose bit (L - 1 - k) is 1 when site k points
down, so an integer is directly the computational-basis index with site 0
as the most significant qubit and |0> = spin up.
"""

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg
import scipy.sparse
import scipy.sparse.linalg

from qcorr.core import PAULI, CorrelationVector, spectrum_bell
from qcorr.geometric import analyze

MAX_L = 16
DENSE_LIMIT = 2000
GROUND_TOL = 1e-10
DEGENERACY_WINDOW = 1e-8
LANCZOS_TOL = 1e-10
LANCZOS_MAXITER = 500
STRUCTURE_TOL = 1e-9
PHYSICAL_TOL = 1e-9
LANCZOS_SEED = 12345

_XX = np.kron(PAULI[0], PAULI[0])
_YY = np.kron(PAULI[1], PAULI[1])
_ZZ = np.kron(PAULI[2], PAULI[2])
_ZI = np.kron(PAULI[2], np.eye(2))
_FLIP = np.real(np.kron(PAULI[0], PAULI[0]))


class SolverError(RuntimeError):
    """Diagonalization failed, or produced a state violating the chain's symmetries."""


@dataclass(frozen=True)
class ChainSpec:
    L: int
    delta: float
    J: float = 1.0
    boundary: str = "periodic"

    def __post_init__(self):
        if not isinstance(self.L, (int, np.integer)) or self.L < 4 or self.L % 2:
            raise ValueError(f"L must be an even integer >= 4, got {self.L!r}")
        if self.L > MAX_L:
            raise ValueError(f"L = {self.L} exceeds the cap of {MAX_L} sites")
        if self.J != 1.0:
            raise ValueError("the energy scale is fixed by J = 1")
        if self.boundary != "periodic":
            raise ValueError("only periodic boundary conditions are supported")


@dataclass(frozen=True)
class GroundStateObservables:
    L: int
    delta: float
    energy_density: float
    g_xx: float
    g_yy: float
    g_zz: float
    g_z: float
    degeneracy: int
    sector_magnetizations: tuple
    rho: np.ndarray = field(repr=False, compare=False)
    bond_spread: float = 0.0


def _popcount(x):
    x = x.copy()
    count = np.zeros_like(x)
    while np.any(x):
        count += x & 1
        x >>= 1
    return count


def sector_basis(L, n_up):
    """Sorted basis integers with exactly ``n_up`` up spins."""
    if not 0 <= n_up <= L:
        raise ValueError(f"n_up must lie in [0, {L}], got {n_up}")
    states = np.arange(2**L, dtype=np.int64)
    return states[_popcount(states) == L - n_up]


def build_sector_hamiltonian(spec, n_up):
    """Sparse symmetric H restricted to the sector with ``n_up`` up spins.

    Diagonal: -(J Delta / 2) sum_i sz_i sz_{i+1}. Off-diagonal: -J for every
    antiparallel bond that can flip-flop.
    """
    L = spec.L
    basis = sector_basis(L, n_up)
    dim = len(basis)
    diag = np.zeros(dim)
    rows, cols = [], []
    for i in range(L):
        j = (i + 1) % L
        bi = (basis >> (L - 1 - i)) & 1
        bj = (basis >> (L - 1 - j)) & 1
        aligned = bi == bj
        diag += np.where(aligned, -0.5, 0.5) * spec.J * spec.delta
        src = np.flatnonzero(~aligned)
        flipped = basis[src] ^ ((1 << (L - 1 - i)) | (1 << (L - 1 - j)))
        rows.append(src)
        cols.append(np.searchsorted(basis, flipped))
    rows = np.concatenate(rows)
    cols = np.concatenate(cols)
    off = scipy.sparse.coo_matrix(
        (np.full(len(rows), -spec.J), (rows, cols)), shape=(dim, dim)
    )
    return (off + scipy.sparse.diags(diag)).tocsr()


def _lowest_eigenpairs(h, n_up):
    """Eigenpairs of one sector up to its own minimum + DEGENERACY_WINDOW."""
    dim = h.shape[0]
    if dim <= DENSE_LIMIT:
        dense = h.toarray()
        k = min(dim, 8)
        while True:
            w, v = scipy.linalg.eigh(dense, subset_by_index=[0, k - 1])
            if k == dim or w[-1] > w[0] + DEGENERACY_WINDOW:
                break
            k = min(dim, 2 * k)
    else:
        rng = np.random.default_rng(LANCZOS_SEED + n_up)
        v0 = rng.standard_normal(dim)
        k = 6
        while True:
            try:
                w, v = scipy.sparse.linalg.eigsh(
                    h, k=k, which="SA", v0=v0, tol=LANCZOS_TOL, maxiter=LANCZOS_MAXITER
                )
            except scipy.sparse.linalg.ArpackNoConvergence as exc:
                raise SolverError(
                    f"Lanczos did not converge in sector n_up={n_up} "
                    f"after {LANCZOS_MAXITER} iterations"
                ) from exc
            order = np.argsort(w)
            w, v = w[order], v[:, order]
            if w[-1] > w[0] + DEGENERACY_WINDOW or k >= dim - 2:
                break
            k = min(dim - 2, 2 * k)
    keep = w <= w[0] + DEGENERACY_WINDOW
    return w[keep], v[:, keep]


def _bond_rdms(L, basis, vec):
    """Two-site reduced density matrices of every bond (i, i+1) for one state."""
    full = np.zeros(2**L)
    full[basis] = vec
    psi = full.reshape((2,) * L)
    out = np.empty((L, 4, 4))
    for i in range(L):
        t = np.moveaxis(psi, (i, (i + 1) % L), (0, 1)).reshape(4, -1)
        out[i] = t @ t.T
    return out


def _sector_scan(spec):
    # Sectors n_up < L/2 are spin-flip images of n_up > L/2.
    L = spec.L
    found = []
    for n_up in range(L // 2, L + 1):
        w, v = _lowest_eigenpairs(build_sector_hamiltonian(spec, n_up), n_up)
        found.append((n_up, w, v))
    return found


def ground_space(spec):
    """Observables of the equal-weight mixture over the degenerate ground space.

    The two-site operator is averaged over all L bonds and over an
    orthonormal basis of the ground space (mirrored sectors included).

    Raises:
        SolverError: on solver failure or if the averaged two-site state
            lacks the symmetric X form expected from U(1) and spin-flip
            symmetry.
    """
    L = spec.L
    scan = _sector_scan(spec)
    e0 = min(float(w[0]) for _, w, _ in scan)

    bond_sum = np.zeros((L, 4, 4))
    magnetizations = []
    count = 0
    for n_up, w, v in scan:
        sel = w <= e0 + GROUND_TOL
        if not np.any(sel):
            continue
        basis = sector_basis(L, n_up)
        for vec in v[:, sel].T:
            rdms = _bond_rdms(L, basis, vec)
            bond_sum += rdms
            count += 1
            magnetizations.append(2 * n_up - L)
            if 2 * n_up != L:
                bond_sum += _FLIP @ rdms @ _FLIP
                count += 1
                magnetizations.append(L - 2 * n_up)

    bonds = bond_sum / count
    rho = bonds.mean(axis=0)
    spread = float(np.max(np.abs(bonds - rho)))
    if spread > STRUCTURE_TOL:
        raise SolverError(f"bond-averaged state not translation invariant (spread {spread:.3g})")
    _check_x_form(rho)

    def expect(op):
        return float(np.real(np.trace(rho @ op)))

    return GroundStateObservables(
        L=L,
        delta=float(spec.delta),
        energy_density=e0 / L,
        g_xx=expect(_XX),
        g_yy=expect(_YY),
        g_zz=expect(_ZZ),
        g_z=expect(_ZI),
        degeneracy=count,
        sector_magnetizations=tuple(sorted(magnetizations)),
        rho=rho,
        bond_spread=spread,
    )


def _check_x_form(rho):
    a, b1, b2, d = rho[0, 0], rho[1, 1], rho[2, 2], rho[3, 3]
    mask = np.ones((4, 4), dtype=bool)
    for i, j in [(0, 0), (1, 1), (2, 2), (3, 3), (1, 2), (2, 1)]:
        mask[i, j] = False
    problems = []
    if abs(a - d) > STRUCTURE_TOL:
        problems.append(f"a != d ({a!r}, {d!r})")
    if abs(b1 - b2) > STRUCTURE_TOL:
        problems.append(f"b1 != b2 ({b1!r}, {b2!r})")
    if np.max(np.abs(rho[mask])) > STRUCTURE_TOL:
        problems.append("nonzero entries outside the X pattern")
    if problems:
        raise SolverError("two-site state is not of the expected form: " + "; ".join(problems))


def check_observables(obs):
    """Raise :class:`SolverError` unless the zero-magnetization and energy identities hold."""
    problems = []
    if abs(obs.g_z) >= GROUND_TOL:
        problems.append(f"G_z = {obs.g_z!r} != 0")
    if abs(obs.g_xx - obs.g_yy) > GROUND_TOL:
        problems.append(f"G_xx != G_yy ({obs.g_xx!r}, {obs.g_yy!r})")
    eps = -0.5 * (obs.g_xx + obs.g_yy + obs.delta * obs.g_zz)
    if abs(eps - obs.energy_density) > STRUCTURE_TOL:
        problems.append(f"energy density {obs.energy_density!r} != {eps!r} from correlators")
    if problems:
        raise SolverError("; ".join(problems))


def bell_coordinates(obs):
    """c1 = c2 = (G_xx + G_yy) / 2 and c3 = G_zz.

    Raises:
        SolverError: if the identities of :func:`check_observables` fail or
            the coordinates leave the physical tetrahedron by more than 1e-9.
    """
    check_observables(obs)
    c12 = 0.5 * (obs.g_xx + obs.g_yy)
    c = CorrelationVector(c12, c12, obs.g_zz)
    lam = spectrum_bell(c)
    if lam.min() < -PHYSICAL_TOL:
        raise SolverError(f"chain produced unphysical Bell coordinates {c} (spectrum {lam})")
    if lam.min() < 0.0:
        # Roundoff just outside a face: rebuild c from the clipped Bell-basis weights.
        lam = np.clip(lam, 0.0, None)
        lam /= lam.sum()
        c12 = lam[0] + lam[1] - lam[2] - lam[3]
        c = CorrelationVector(c12, c12, lam[0] - lam[1] + lam[2] - lam[3])
    return c


def ground_sectors(L, delta):
    return ground_space(ChainSpec(L, delta)).sector_magnetizations


def hellmann_feynman_check(spec, h):
    """Compare correlator-based Bell coordinates with energy derivatives.

    Returns:
        ``(|c1 - (Delta e' - e)|, |c3 + 2 e'|)`` with e' from a central
        difference of step ``h``.

    Raises:
        ValueError: if ``h`` is outside [1e-5, 1e-3] or the ground-space
            structure changes within 2 h of ``spec.delta`` (a level crossing).
    """
    if not 1e-5 <= h <= 1e-3:
        raise ValueError("step h must lie in [1e-5, 1e-3]")
    d = spec.delta
    probes = {x: ground_space(ChainSpec(spec.L, x)) for x in (d - 2 * h, d, d + 2 * h)}
    sectors = {obs.sector_magnetizations for obs in probes.values()}
    if len(sectors) > 1:
        raise ValueError(f"Delta = {d} lies within 2h of a ground-state level crossing")
    obs = probes[d]
    c = bell_coordinates(obs)
    e_plus = ground_space(ChainSpec(spec.L, d + h)).energy_density
    e_minus = ground_space(ChainSpec(spec.L, d - h)).energy_density
    slope = (e_plus - e_minus) / (2 * h)
    r1 = abs(c.c1 - (d * slope - obs.energy_density))
    r2 = abs(c.c3 - (-2.0 * slope))
    return r1, r2


@dataclass
class SweepRow:
    delta: float
    observables: GroundStateObservables = None
    c: CorrelationVector = None
    report: object = None
    status: str = "ok"


def _solve_row(L, delta):
    try:
        obs = ground_space(ChainSpec(L, delta))
        c = bell_coordinates(obs)
        return SweepRow(delta, obs, c, analyze(c))
    except (SolverError, ArithmeticError, ValueError) as exc:
        return SweepRow(delta, status=f"error: {exc}")


def default_workers():
    env = os.environ.get("QCORR_THREADS")
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


def sweep_delta(L, delta_min, delta_max, steps, workers=None):
    """Solve the chain on a uniform, endpoint-inclusive grid of anisotropies.

    Rows are independent; a failing row carries its error in ``status``
    and the sweep carries on. Output is ordered by Delta regardless of
    ``workers``.
    """
    if steps < 2:
        raise ValueError("a sweep needs at least 2 steps")
    ChainSpec(L, delta_min)
    deltas = [float(x) for x in np.linspace(delta_min, delta_max, steps)]
    workers = workers or default_workers()
    if workers == 1:
        return [_solve_row(L, d) for d in deltas]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(lambda d: _solve_row(L, d), deltas))


@dataclass(frozen=True)
class Transition:
    delta: float
    kind: str
    lo: float
    hi: float


def _xz_gap(L, delta):
    obs = ground_space(ChainSpec(L, delta))
    return abs(obs.g_xx) - abs(obs.g_zz)


def _bisect_crossing(L, lo, hi, f_lo, tol):
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        f_mid = _xz_gap(L, mid)
        if abs(f_mid) <= 1e-12:
            return mid, mid, mid
        if np.sign(f_mid) == np.sign(f_lo):
            lo, f_lo = mid, f_mid
        else:
            hi = mid
    return 0.5 * (lo + hi), lo, hi


def detect_transitions(rows, jump_threshold=0.1, window=1, refine_tol=1e-6):
    """Flag first-order jumps and |G_xx| = |G_zz| crossings in a Delta sweep.

    A first-order transition is an adjacent-row jump in (c1, c3) larger than
    ``jump_threshold``; jumps whose row gaps are at most ``window`` apart
    merge into one flag located at the middle of the merged span. A
    crossing is a sign change of |G_xx| - |G_zz| between rows not separated
    by a jump, refined by bisection on the chain itself to ``refine_tol``.
    Since C_G = max(|G_xx|, |G_zz|), every crossing is also a kink of C_G.
    """
    good = [r for r in rows if r.status == "ok"]
    if len(good) < 5:
        raise ValueError("transition detection needs at least 5 solved rows")
    L = good[0].observables.L
    deltas = np.array([r.delta for r in good])
    c1 = np.array([r.c.c1 for r in good])
    c3 = np.array([r.c.c3 for r in good])

    jumps = np.flatnonzero(np.maximum(np.abs(np.diff(c1)), np.abs(np.diff(c3))) > jump_threshold)
    groups = []
    for k in jumps:
        if groups and k - groups[-1][-1] <= window:
            groups[-1].append(k)
        else:
            groups.append([k])
    found = []
    jump_spans = []
    for g in groups:
        lo, hi = deltas[g[0]], deltas[g[-1] + 1]
        jump_spans.append((lo, hi))
        found.append(Transition(float(0.5 * (lo + hi)), "first_order", float(lo), float(hi)))

    gap = np.array([abs(r.observables.g_xx) - abs(r.observables.g_zz) for r in good])
    signed = [(k, np.sign(g)) for k, g in enumerate(gap) if abs(g) > 1e-12]
    for (k0, s0), (k1, s1) in zip(signed, signed[1:]):
        if s0 == s1:
            continue
        lo, hi = deltas[k0], deltas[k1]
        if any(a < hi and lo < b for a, b in jump_spans):
            continue
        where, a, b = _bisect_crossing(L, lo, hi, gap[k0], refine_tol / 10)
        found.append(Transition(float(where), "crossing", float(a), float(b)))
    return sorted(found, key=lambda t: t.delta)
