"""Elementary two-qubit unitaries, Haar sampling, marginal sweeps and scripted scenarios.

Unitaries are plain complex ndarrays; :func:`is_unitary` checks the defining property.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.spatial import cKDTree

from .errors import DimensionError, DomainError, PreconditionError
from .spectra import Spectrum, as_rng
from .states import (
    DensityMatrix,
    MarginalPoint,
    XState,
    batch_marginal_points,
    batch_qmi,
    energy,
    local_hamiltonian,
    partial_trace,
    product_state,
    qmi,
    t_matrix,
)
from .two_qubit_region import contains_many, region

UNITARY_TOL = 1e-10
H_TOTAL = local_hamiltonian(2, 2)


def is_unitary(u, tol: float = UNITARY_TOL) -> bool:
    u = np.asarray(u)
    return bool(np.abs(u.conj().T @ u - np.eye(u.shape[0])).max() <= tol)


def _plane_rotation(i: int, j: int, angle: float) -> np.ndarray:
    c, s = np.cos(angle / 2), np.sin(angle / 2)
    u = np.eye(4, dtype=complex)
    u[i, i] = u[j, j] = c
    u[i, j] = s
    u[j, i] = -s
    return u


def u_odd(theta: float) -> np.ndarray:
    """Rotation by theta/2 in span{|01>, |10>}; commutes with H_A + H_B."""
    return _plane_rotation(1, 2, theta)


def u_even(phi: float) -> np.ndarray:
    """Rotation by phi/2 in span{|00>, |11>}; does not conserve energy."""
    return _plane_rotation(0, 3, phi)


def u_tilde(xi: float) -> np.ndarray:
    """Rotation by xi/2 in span{|00>, |01>}."""
    return _plane_rotation(0, 1, xi)


FAMILIES = {"odd": u_odd, "even": u_even, "tilde": u_tilde}


def haar_unitaries(n: int, d: int, rng) -> np.ndarray:
    """``n`` Haar-random d x d unitaries from QR of complex Ginibre matrices."""
    if d < 2:
        raise DomainError("need d >= 2")
    rng = as_rng(rng)
    z = (rng.standard_normal((n, d, d)) + 1j * rng.standard_normal((n, d, d))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    ph = np.diagonal(r, axis1=1, axis2=2)
    return q * (ph / np.abs(ph))[:, None, :]


def haar_unitary(d: int, rng_seed=None) -> np.ndarray:
    return haar_unitaries(1, d, rng_seed)[0]


def evolve(rho: DensityMatrix, u) -> DensityMatrix:
    u = np.asarray(u)
    if u.shape != rho.entries.shape:
        raise DimensionError(f"unitary shape {u.shape} vs state shape {rho.entries.shape}")
    return DensityMatrix(u @ rho.entries @ u.conj().T, rho.dims)


def orbit_samples(spectrum: Spectrum, n: int, rng) -> np.ndarray:
    """``n`` states U diag(Lambda) U^dagger with Haar U, as an (n, d, d) array."""
    u = haar_unitaries(n, spectrum.d, rng)
    return (u * spectrum.values[None, None, :]) @ u.conj().transpose(0, 2, 1)


@dataclass(frozen=True)
class SweepTrace:
    """Marginal points along U(angle) rho0 U(angle)^dagger.

    ``populations`` holds the |1> populations of each marginal when those
    marginals are diagonal (NaN otherwise); the straight-line structure of
    the odd and even sweeps shows up in them before folding at 1/2.
    """

    family: str
    angles: np.ndarray
    points: np.ndarray
    qmi: np.ndarray
    populations: np.ndarray = field(repr=False)

    def __len__(self):
        return len(self.angles)

    def marginal_points(self) -> list[MarginalPoint]:
        return [MarginalPoint(*p) for p in self.points]

    def rows(self):
        for a, p, i in zip(self.angles, self.points, self.qmi):
            yield a, np.cos(a), p[0], p[1], i


def _excited_populations(mats: np.ndarray) -> np.ndarray:
    t = mats.reshape(-1, 2, 2, 2, 2)
    ra = np.einsum("nijkj->nik", t)
    rb = np.einsum("nijil->njl", t)
    pops = np.column_stack([ra[:, 1, 1].real, rb[:, 1, 1].real])
    diag = (np.abs(ra[:, 0, 1]) <= 1e-12) & (np.abs(rb[:, 0, 1]) <= 1e-12)
    pops[~diag] = np.nan
    return pops


def sweep(rho0: DensityMatrix, family: str = "odd", n_steps: int = 256) -> SweepTrace:
    """Apply one unitary family at ``n_steps`` angles uniform in [0, pi]."""
    if rho0.dims != (2, 2):
        raise DimensionError("sweeps act on two-qubit states")
    try:
        gen = FAMILIES[family]
    except KeyError:
        raise DomainError(f"family must be one of {sorted(FAMILIES)}, not {family!r}") from None
    angles = np.linspace(0.0, np.pi, n_steps)
    us = np.array([gen(a) for a in angles])
    mats = us @ rho0.entries @ us.conj().transpose(0, 2, 1)
    s = rho0.entropy()
    return SweepTrace(family, angles, batch_marginal_points(mats), batch_qmi(mats, (2, 2), s), _excited_populations(mats))


def _strict4(spectrum: Spectrum):
    if spectrum.dims != (2, 2):
        raise DimensionError("two-qubit spectrum required")
    return spectrum.values


def tau_states(spectrum: Spectrum) -> tuple[DensityMatrix, DensityMatrix, DensityMatrix]:
    """Classical representatives of the three QMI classes of 2x2 arrangements."""
    l1, l2, l3, l4 = _strict4(spectrum)
    return tuple(XState(*w).materialize() for w in ((l1, l2, l3, l4), (l2, l1, l3, l4), (l3, l1, l2, l4)))


def triple_point_xstates(spectrum: Spectrum) -> tuple[XState, XState, XState]:
    l1, l2, l3, l4 = _strict4(spectrum)
    if min(l1 - l2, l2 - l3, l3 - l4) <= 1e-9:
        raise PreconditionError("triple point needs a strictly decreasing spectrum; the three states coincide otherwise")
    return (
        XState(l1, l2, l3, l4, 0.0, (l3 - l4) / (l1 - l4)),
        XState(l2, l1, l3, l4, 0.0, (l3 - l4) / (l2 - l4)),
        XState(l3, l1, l2, l4, 0.0, 1.0),
    )


def triple_point_states(spectrum: Spectrum) -> tuple[DensityMatrix, DensityMatrix, DensityMatrix]:
    """Three X-states sharing the marginal point ((1 - l3 + l4)/2, same) and the same QMI."""
    return tuple(x.materialize() for x in triple_point_xstates(spectrum))


def secu_moment_check(rho: DensityMatrix, hamiltonian, u, k_max: int = 4) -> dict:
    """|Tr[U rho U^dagger H^k] - Tr[rho H^k]| for k = 1..k_max."""
    h = np.asarray(hamiltonian, dtype=complex)
    rho2 = evolve(rho, u)
    shifts = []
    hk = np.eye(h.shape[0], dtype=complex)
    for _ in range(k_max):
        hk = hk @ h
        shifts.append(abs(energy(rho2, hk) - energy(rho, hk)))
    comm = float(np.abs(np.asarray(u) @ h - h @ np.asarray(u)).max())
    return {"shifts": shifts, "commutator_norm": comm, "max_shift": max(shifts) if shifts else 0.0}


def unitary_between(rho: DensityMatrix, sigma: DensityMatrix) -> np.ndarray:
    """A unitary U with U rho U^dagger = sigma for isospectral states."""
    ea, va = np.linalg.eigh(rho.entries)
    eb, vb = np.linalg.eigh(sigma.entries)
    if np.abs(ea - eb).max() > 1e-9:
        raise DomainError("states are not on the same unitary orbit")
    return vb @ va.conj().T


def local_energies(rho: DensityMatrix) -> tuple[float, float]:
    """(<H_A>, <H_B>) with H_A = H_B = |1><1|."""
    ra = partial_trace(rho, "A").entries
    rb = partial_trace(rho, "B").entries
    return float(ra[1, 1].real), float(rb[1, 1].real)


@dataclass(frozen=True)
class DemonReport:
    spectrum: Spectrum
    lambda_a: float
    lambda_b: float
    cos_phi: float
    cos_phi_prime: float
    rho_c: DensityMatrix
    rho_d: DensityMatrix
    gamma_d: DensityMatrix
    qmi_c: float
    qmi_d: float
    qmi_gamma: float
    energies_initial: tuple[float, float]
    energies_final: tuple[float, float]
    gamma_marginals_diagonal: bool
    gamma_on_orbit: bool

    def to_dict(self) -> dict:
        return {
            "spectrum": self.spectrum.values.tolist(),
            "spectrum_C": self.rho_c.eigenvalues().tolist(),
            "lambda_a": self.lambda_a,
            "lambda_b": self.lambda_b,
            "cos_phi": self.cos_phi,
            "cos_phi_prime": self.cos_phi_prime,
            "I_rho_C": self.qmi_c,
            "I_rho_D": self.qmi_d,
            "I_gamma_D": self.qmi_gamma,
            "E_A_initial": self.energies_initial[0],
            "E_B_initial": self.energies_initial[1],
            "E_A_final": self.energies_final[0],
            "E_B_final": self.energies_final[1],
            "E_total_initial": sum(self.energies_initial),
            "E_total_final": sum(self.energies_final),
            "gamma_marginals_diagonal": self.gamma_marginals_diagonal,
            "gamma_on_orbit": self.gamma_on_orbit,
            "rho_C": self.rho_c.to_json(),
            "rho_D": self.rho_d.to_json(),
            "gamma_D": self.gamma_d.to_json(),
        }


def demon_scenario(lambda_b: float, spectrum: Spectrum) -> DemonReport:
    """Correlated state with product-state marginals, then a WECU that reverses heat flow.

    rho_D = X-state (l1, l2, l3, l4; cos theta = 1, cos phi) whose marginals match
    Charlie's product state; gamma_D = X-state (l1, l2, l4, l3; 1, cos phi') with
    cos phi' fixed by energy conservation.
    """
    l1, l2, l3, l4 = _strict4(spectrum)
    lambda_a = lambda_b - (l2 - l3)
    if not 0 <= lambda_a <= 0.5 or not 0 <= lambda_b <= 0.5:
        raise PreconditionError(f"lambda_A = lambda_B - (l2 - l3) = {lambda_a:.12g} must lie in [0, 1/2]")
    if l1 - l4 <= 0:
        raise PreconditionError("l1 = l4: the spectrum is uniform and admits no correlated state")
    cos_phi = (1 + l2 - l3 - 2 * lambda_b) / (l1 - l4)
    if abs(cos_phi) > 1 + 1e-12:
        lo = 0.5 * (1 - (l2 - l3) - (l1 - l4))
        hi = 0.5 * (1 - (l2 - l3) + (l1 - l4))
        raise PreconditionError(
            f"cos phi = {cos_phi:.12g} outside [-1, 1]; compatibility needs {lo:.12g} <= lambda_A <= {hi:.12g}"
        )
    cos_phi = float(np.clip(cos_phi, -1, 1))
    rho_d = XState(l1, l2, l3, l4, 1.0, cos_phi).materialize()
    e0 = energy(rho_d, H_TOTAL)
    if l1 - l3 <= 0:
        raise PreconditionError("l1 = l3: the demon ansatz cannot change the energy")
    cos_phi_p = (1 - e0) / (l1 - l3)
    if abs(cos_phi_p) > 1 + 1e-12:
        raise PreconditionError(f"energy conservation needs cos phi' = {cos_phi_p:.12g}, outside [-1, 1]")
    cos_phi_p = float(np.clip(cos_phi_p, -1, 1))
    gamma_d = XState(l1, l2, l4, l3, 1.0, cos_phi_p).materialize()
    rho_a = np.diag([1 - lambda_a, lambda_a])
    rho_b = np.diag([1 - lambda_b, lambda_b])
    rho_c = product_state(rho_a, rho_b)
    ga, gb = partial_trace(gamma_d, "A").entries, partial_trace(gamma_d, "B").entries
    diag_ok = abs(ga[0, 1]) <= 1e-12 and abs(gb[0, 1]) <= 1e-12
    return DemonReport(
        spectrum=spectrum,
        lambda_a=float(lambda_a),
        lambda_b=float(lambda_b),
        cos_phi=cos_phi,
        cos_phi_prime=cos_phi_p,
        rho_c=rho_c,
        rho_d=rho_d,
        gamma_d=gamma_d,
        qmi_c=qmi(rho_c),
        qmi_d=qmi(rho_d),
        qmi_gamma=qmi(gamma_d),
        energies_initial=local_energies(rho_d),
        energies_final=local_energies(gamma_d),
        gamma_marginals_diagonal=bool(diag_ok),
        gamma_on_orbit=bool(np.abs(gamma_d.eigenvalues() - spectrum.values).max() <= 1e-9),
    )


def t_matrix_spread(states) -> float:
    """Largest entrywise T-matrix difference over all pairs of states."""
    ts = [t_matrix(s) for s in states]
    return max(float(np.abs(a - b).max()) for i, a in enumerate(ts) for b in ts[i + 1 :])


def sweep_union_points(spectrum: Spectrum, n: int = 300, mirror: bool = True) -> np.ndarray:
    """Marginal points reached from the classical states by the three unitary families.

    Includes the two-angle products U_odd(theta) U_even(phi) acting on each tau
    state (closed form), U_tilde(xi) acting on X-state(l1, l2, l3, l4; cos theta, 1),
    and, with ``mirror``, the subsystem swap of all of these.
    """
    l1, l2, l3, l4 = _strict4(spectrum)
    ang = np.linspace(0.0, np.pi, n)
    cx, cy = np.meshgrid(np.cos(ang), np.cos(ang), indexing="ij")
    cx, cy = cx.ravel(), cy.ravel()
    chunks = []
    for a, b, g, d in ((l1, l2, l3, l4), (l2, l1, l3, l4), (l3, l1, l2, l4)):
        pa = 0.5 * (1 - (b - g) * cx - (a - d) * cy)
        pb = 0.5 * (1 + (b - g) * cx - (a - d) * cy)
        chunks.append(np.column_stack([np.minimum(pa, 1 - pa), np.minimum(pb, 1 - pb)]))
    us = np.array([u_tilde(x) for x in ang]).real
    for ct in np.cos(ang):
        r0 = XState(l1, l2, l3, l4, ct, 1.0).matrix()
        chunks.append(batch_marginal_points(us @ r0 @ us.transpose(0, 2, 1)))
    pts = np.vstack(chunks)
    if mirror:
        pts = np.vstack([pts, pts[:, ::-1]])
    return pts


def coverage_distance(spectrum: Spectrum, grid_n: int = 100, n: int = 300, mirror: bool = True) -> tuple[float, int]:
    """Largest distance from a grid point of R to the sweep union, and the number of grid points in R."""
    g = np.linspace(0.0, 0.5, grid_n)
    ga, gb = np.meshgrid(g, g, indexing="ij")
    grid = np.column_stack([ga.ravel(), gb.ravel()])
    inside = grid[contains_many(region(spectrum), grid)]
    tree = cKDTree(sweep_union_points(spectrum, n, mirror))
    dist, _ = tree.query(inside)
    return float(dist.max()) if dist.size else 0.0, int(inside.shape[0])

