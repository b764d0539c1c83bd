"""Collision model with dephasing, the qubit-qutrit counterexample and the heat-flow check.

Temperatures use k = 1 and unit level spacing: a qubit with excited
population p has inverse temperature beta = ln((1 - p) / p).  The heat-flow
inequality is evaluated in nats on both sides.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionError, DomainError, PreconditionError
from .spectra import Spectrum, as_rng, shannon_entropy
from .states import DensityMatrix, XState, energy, local_hamiltonian, partial_trace, qmi
from .tableaux import Table, exhaustive_extremum, is_young, minimal_table, table_mi
from .orbit_dynamics import H_TOTAL, evolve, haar_unitary, u_even, u_odd

DIAG_TOL = 1e-12


def _diagonal_of(sigma: DensityMatrix) -> np.ndarray:
    m = sigma.entries
    if np.abs(m - np.diag(np.diag(m))).max() > DIAG_TOL:
        raise PreconditionError("state must be diagonal in the computational basis")
    return np.diag(m).real.copy()


def _check_p(p):
    if p < 0 or p > 1:
        raise DomainError(f"p = {p} outside [0, 1]")


def dephase(rho: DensityMatrix) -> DensityMatrix:
    """Drop all coherences in the computational basis."""
    return DensityMatrix(np.diag(np.diag(rho.entries).real).astype(complex), rho.dims)


def decorrelate(rho: DensityMatrix) -> DensityMatrix:
    """Replace a state by the product of its marginals."""
    return DensityMatrix(np.kron(partial_trace(rho, "A").entries, partial_trace(rho, "B").entries), rho.dims)


def collide_once(sigma: DensityMatrix, p: float) -> DensityMatrix:
    """One collision on a diagonal two-qubit state: mix the |01>, |10> populations.

    Middle populations become (p l2 + (1-p) l3, (1-p) l2 + p l3).
    """
    _check_p(p)
    if sigma.dims != (2, 2):
        raise DimensionError("collisions act on two qubits")
    d = _diagonal_of(sigma)
    d[1], d[2] = p * d[1] + (1 - p) * d[2], (1 - p) * d[1] + p * d[2]
    return DensityMatrix(np.diag(d).astype(complex), (2, 2))


def theta_for(p: float) -> float:
    """Angle with cos^2(theta/2) = p for the odd rotation."""
    _check_p(p)
    return float(2 * np.arccos(np.sqrt(p)))


def collide_once_unitary(sigma: DensityMatrix, p: float, mode: str = "dephase") -> DensityMatrix:
    """The literal map: rotate with U_odd, then dephase (or decorrelate)."""
    rho = evolve(sigma, u_odd(theta_for(p)))
    if mode == "dephase":
        return dephase(rho)
    if mode == "decorrelate":
        return decorrelate(rho)
    raise DomainError(f"mode must be 'dephase' or 'decorrelate', not {mode!r}")


@dataclass(frozen=True)
class CollisionStep:
    diagonal: np.ndarray
    spectrum: Spectrum
    marginal_entropies: tuple[float, float]
    gap: float
    qmi: float
    entropy_before_dephasing: float
    entropy_after_dephasing: float


@dataclass(frozen=True)
class CollisionTrajectory:
    steps: tuple[CollisionStep, ...]
    schedule: tuple[float, ...]
    mode: str

    def gaps(self) -> np.ndarray:
        return np.array([s.gap for s in self.steps])

    def rows(self):
        for k, s in enumerate(self.steps):
            yield k, s.diagonal[1], s.diagonal[2], s.gap, s.marginal_entropies[0], s.marginal_entropies[1], s.qmi


def _step(diag, s_pre, s_post) -> CollisionStep:
    rho = DensityMatrix(np.diag(diag).astype(complex), (2, 2))
    s_a = shannon_entropy([diag[0] + diag[1], diag[2] + diag[3]])
    s_b = shannon_entropy([diag[0] + diag[2], diag[1] + diag[3]])
    return CollisionStep(
        diagonal=np.array(diag),
        spectrum=Spectrum(diag / diag.sum(), (2, 2)),
        marginal_entropies=(s_a, s_b),
        gap=float(abs(diag[1] - diag[2])),
        qmi=qmi(rho),
        entropy_before_dephasing=s_pre,
        entropy_after_dephasing=s_post,
    )


def is_minimal_ordering(diag, tol: float = 1e-12) -> bool:
    """Largest population on |00> and smallest on |11>."""
    d = np.asarray(diag)
    return bool(d[0] >= d[1:].max() - tol and d[3] <= d[:3].min() + tol)


def run_collisions(sigma0: DensityMatrix, schedule, mode: str = "dephase") -> CollisionTrajectory:
    """Iterate U_odd(theta_n) followed by dephasing (or decorrelation).

    Step 0 is the initial state; step n follows the n-th collision.
    """
    if sigma0.dims != (2, 2):
        raise DimensionError("collisions act on two qubits")
    diag = _diagonal_of(sigma0)
    if not is_minimal_ordering(diag):
        raise PreconditionError("initial populations must be in minimally correlated order (largest on |00>, smallest on |11>)")
    s0 = shannon_entropy(diag)
    steps = [_step(diag, s0, s0)]
    rho = sigma0
    for p in schedule:
        pre = evolve(rho, u_odd(theta_for(p)))
        rho = dephase(pre) if mode == "dephase" else decorrelate(pre) if mode == "decorrelate" else None
        if rho is None:
            raise DomainError(f"mode must be 'dephase' or 'decorrelate', not {mode!r}")
        d = np.diag(rho.entries).real
        steps.append(_step(d, pre.entropy(), rho.entropy()))
    return CollisionTrajectory(tuple(steps), tuple(float(p) for p in schedule), mode)


@dataclass(frozen=True)
class QutritReport:
    spectrum: Spectrum
    before: Table
    after: Table
    qmi_before: float
    qmi_after: float
    after_is_young: bool
    before_is_minimal: bool
    minimal_pattern: np.ndarray
    minimal_label: int

    @property
    def increased(self) -> bool:
        return self.qmi_after > self.qmi_before

    def to_dict(self) -> dict:
        return {
            "spectrum": self.spectrum.values.tolist(),
            "table_before": self.before.entries.tolist(),
            "table_after": self.after.entries.tolist(),
            "I_before": self.qmi_before,
            "I_after": self.qmi_after,
            "increased": self.increased,
            "after_is_young": self.after_is_young,
            "before_is_minimal": self.before_is_minimal,
            "minimal_pattern": self.minimal_pattern.tolist(),
            "minimal_label": self.minimal_label,
        }


def qutrit_counterexample(spectrum: Spectrum, require_minimal: bool = False) -> QutritReport:
    """Swap the |01> and |10> populations of the row-sorted qubit-qutrit table.

    |01> and |10> both carry one unit of energy under H_A + H_B with
    H_B = diag(0, 1, 2), so the swap is energy conserving.  With
    ``require_minimal`` the row-sorted table must be the exhaustive minimum.
    """
    if spectrum.dims != (2, 3):
        raise DimensionError(f"qubit-qutrit spectrum (dims 2x3) required, got {spectrum.dims}")
    before = spectrum.values.reshape(2, 3).copy()
    after = before.copy()
    after[0, 1], after[1, 0] = before[1, 0], before[0, 1]
    t0, t1 = Table(before), Table(after)
    best = exhaustive_extremum(spectrum, kind="min")
    young = minimal_table(spectrum)
    i0 = table_mi(t0)
    is_min = i0 <= best.value + 1e-12
    if require_minimal and not is_min:
        raise PreconditionError(
            f"row-sorted table is not minimal; the minimum {best.value:.12g} is attained by "
            f"pattern {young.pattern.tolist()} (Young label {young.label})"
        )
    return QutritReport(
        spectrum=spectrum,
        before=t0,
        after=t1,
        qmi_before=i0,
        qmi_after=table_mi(t1),
        after_is_young=is_young(after),
        before_is_minimal=bool(is_min),
        minimal_pattern=young.pattern,
        minimal_label=int(young.label),
    )


def inverse_temperature(p: float) -> float:
    """beta = ln((1 - p)/p) for excited population p in (0, 1)."""
    return float(np.log((1 - p) / p))


@dataclass(frozen=True)
class HeatFlowReport:
    lambda_a: float
    lambda_b: float
    beta_a: float
    beta_b: float
    heat_a: float
    delta_i_bits: float
    lhs: float
    energy_shift: float
    holds: bool

    @property
    def temperature_a(self) -> float:
        return 1.0 / self.beta_a

    @property
    def temperature_b(self) -> float:
        return 1.0 / self.beta_b

    @property
    def delta_i_nats(self) -> float:
        return self.delta_i_bits * np.log(2)

    def to_dict(self) -> dict:
        return {
            "units": "nats; k = 1; unit level spacing; beta = ln((1 - p)/p)",
            "lambda_a": self.lambda_a,
            "lambda_b": self.lambda_b,
            "T_A": self.temperature_a,
            "T_B": self.temperature_b,
            "beta_A": self.beta_a,
            "beta_B": self.beta_b,
            "Q_A": self.heat_a,
            "lhs_Q_A_times_beta_diff": self.lhs,
            "delta_I_bits": self.delta_i_bits,
            "delta_I_nats": self.delta_i_nats,
            "energy_shift": self.energy_shift,
            "holds": self.holds,
        }


def heat_flow_check(rho: DensityMatrix, u, slack: float = 1e-9) -> HeatFlowReport:
    """Check Q_A (beta_A - beta_B) >= I(U rho U^dagger) - I(rho), both sides in nats."""
    if rho.dims != (2, 2):
        raise DimensionError("heat-flow check needs a two-qubit state")
    ra, rb = partial_trace(rho, "A").entries, partial_trace(rho, "B").entries
    if abs(ra[0, 1]) > 1e-9 or abs(rb[0, 1]) > 1e-9:
        raise PreconditionError("marginals do not commute with the local Hamiltonians (not thermal)")
    pa, pb = float(ra[1, 1].real), float(rb[1, 1].real)
    for p in (pa, pb):
        if p <= 1e-12 or p >= 1 - 1e-12 or abs(p - 0.5) <= 1e-12:
            raise PreconditionError(f"marginal population {p} gives zero or infinite temperature")
    rho2 = evolve(rho, u)
    shift = energy(rho2, H_TOTAL) - energy(rho, H_TOTAL)
    if abs(shift) >= 1e-9:
        raise PreconditionError(f"unitary changes the mean energy by {shift:.3g}")
    ba, bb = inverse_temperature(pa), inverse_temperature(pb)
    q_a = float(partial_trace(rho2, "A").entries[1, 1].real) - pa
    di = qmi(rho2) - qmi(rho)
    lhs = q_a * (ba - bb)
    return HeatFlowReport(pa, pb, ba, bb, q_a, di, lhs, shift, bool(lhs >= di * np.log(2) - slack))


def thermal_marginal_state(rng, spectrum: Spectrum | None = None) -> DensityMatrix:
    """Random two-qubit X-state: a random orbit state twirled by Z (x) Z.

    Averaging rho with (Z (x) Z) rho (Z (x) Z) kills every coherence between
    the even and odd parity sectors, which leaves both marginals diagonal.
    """
    rng = as_rng(rng)
    if spectrum is None:
        spectrum = Spectrum(-np.sort(-rng.dirichlet(np.ones(4))), (2, 2))
    u = haar_unitary(4, rng)
    m = (u * spectrum.values) @ u.conj().T
    zz = np.diag([1.0, -1.0, -1.0, 1.0])
    return DensityMatrix(0.5 * (m + zz @ m @ zz), (2, 2))


def random_secu(rng) -> np.ndarray:
    """Phase on |00>, an arbitrary U(2) on span{|01>, |10>}, phase on |11>."""
    rng = as_rng(rng)
    u = np.zeros((4, 4), dtype=complex)
    u[0, 0], u[3, 3] = np.exp(2j * np.pi * rng.random(2))
    u[1:3, 1:3] = haar_unitary(2, rng)
    return u


def energy_preserving_even_rotation(rho: DensityMatrix) -> np.ndarray:
    """Non-trivial U_even(phi) that leaves <H_A + H_B> of ``rho`` unchanged.

    With a = <00|rho|00>, b = <11|rho|11> and c = Re<00|rho|11>, the rotation
    keeps the energy when tan(phi/2) = 2c / (a - b) (up to sign convention,
    settled by direct evaluation).
    """
    m = rho.entries
    a, b, c = m[0, 0].real, m[3, 3].real, m[0, 3].real
    e0 = energy(rho, H_TOTAL)
    best = None
    for sign in (1.0, -1.0):
        phi = 2 * np.arctan2(sign * 2 * c, a - b)
        u = u_even(phi)
        err = abs(energy(evolve(rho, u), H_TOTAL) - e0)
        if best is None or err < best[0]:
            best = (err, u)
    return best[1]


def random_wecu(rho: DensityMatrix, rng) -> np.ndarray:
    """Weakly energy-conserving unitary for ``rho``: SECU, energy-neutral even rotation, SECU."""
    rng = as_rng(rng)
    u1 = random_secu(rng)
    u_mid = energy_preserving_even_rotation(evolve(rho, u1))
    return random_secu(rng) @ u_mid @ u1


def sample_heat_flow_pairs(n: int, rng, wecu_fraction: float = 0.5):
    """Yield ``n`` (thermal-marginal state, energy-conserving unitary) pairs.

    States whose marginals are too close to pure or maximally mixed are redrawn.
    """
    rng = as_rng(rng)
    made = 0
    while made < n:
        rho = thermal_marginal_state(rng)
        pa = partial_trace(rho, "A").entries[1, 1].real
        pb = partial_trace(rho, "B").entries[1, 1].real
        if min(pa, pb, 1 - pa, 1 - pb) < 1e-6 or min(abs(pa - 0.5), abs(pb - 0.5)) < 1e-6:
            continue
        u = random_wecu(rho, rng) if rng.random() < wecu_fraction else random_secu(rng)
        if abs(energy(evolve(rho, u), H_TOTAL) - energy(rho, H_TOTAL)) >= 1e-10:
            continue
        made += 1
        yield rho, u


def product_thermal_state(lambda_a: float, lambda_b: float) -> DensityMatrix:
    return XState(
        (1 - lambda_a) * (1 - lambda_b),
        (1 - lambda_a) * lambda_b,
        lambda_a * (1 - lambda_b),
        lambda_a * lambda_b,
    ).materialize()


def qutrit_hamiltonian() -> np.ndarray:
    """H_A + H_B for a qubit and a qutrit with unit spacing."""
    return local_hamiltonian(2, 3)

