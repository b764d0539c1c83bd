"""Bipartite density matrices: partial traces, entropies, mutual information, X-states.

Basis convention: |i_A j_B> is row ``i_A * d_B + j_B``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionError, DomainError
from .spectra import Spectrum, entropy_rows, shannon_entropy

HERM_TOL = 1e-10
TRACE_TOL = 1e-10
EIG_TOL = 1e-9

PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    entries: np.ndarray
    dims: tuple[int, int]

    def __post_init__(self):
        m = np.array(self.entries, dtype=complex)
        d_a, d_b = (int(x) for x in self.dims)
        d = d_a * d_b
        if m.shape != (d, d):
            raise DimensionError(f"matrix shape {m.shape} does not match dims {d_a}x{d_b}")
        if np.abs(m - m.conj().T).max() > HERM_TOL:
            raise DomainError("matrix is not Hermitian")
        if abs(np.trace(m) - 1) > TRACE_TOL:
            raise DomainError(f"trace {np.trace(m).real:.12g} != 1")
        m = 0.5 * (m + m.conj().T)
        if np.linalg.eigvalsh(m).min() < -EIG_TOL:
            raise DomainError("matrix has a negative eigenvalue")
        m.setflags(write=False)
        object.__setattr__(self, "entries", m)
        object.__setattr__(self, "dims", (d_a, d_b))

    @property
    def d(self) -> int:
        return self.entries.shape[0]

    def eigenvalues(self) -> np.ndarray:
        """Eigenvalues sorted non-increasing, clipped at zero."""
        return np.clip(np.linalg.eigvalsh(self.entries)[::-1], 0.0, None)

    def spectrum(self) -> Spectrum:
        ev = self.eigenvalues()
        return Spectrum(ev / ev.sum(), self.dims)

    def entropy(self) -> float:
        return shannon_entropy(self.eigenvalues())

    def to_json(self) -> dict:
        return {
            "dims": list(self.dims),
            "real_part": self.entries.real.tolist(),
            "imag_part": self.entries.imag.tolist(),
        }

    @classmethod
    def from_json(cls, obj: dict) -> DensityMatrix:
        m = np.asarray(obj["real_part"], dtype=float) + 1j * np.asarray(obj["imag_part"], dtype=float)
        return cls(m, tuple(obj["dims"]))


@dataclass(frozen=True)
class MarginalPoint:
    """Smallest eigenvalues (lambda_A, lambda_B) of the two qubit marginals."""

    lambda_a: float
    lambda_b: float

    def __post_init__(self):
        for v in (self.lambda_a, self.lambda_b):
            if v < -1e-12 or v > 0.5 + 1e-12:
                raise DomainError(f"marginal eigenvalue {v} outside [0, 1/2]")

    def as_tuple(self) -> tuple[float, float]:
        return (self.lambda_a, self.lambda_b)

    def swapped(self) -> MarginalPoint:
        return MarginalPoint(self.lambda_b, self.lambda_a)


def diagonal_state(diag, dims) -> DensityMatrix:
    """Classical state with the given computational-basis populations."""
    return DensityMatrix(np.diag(np.asarray(diag, dtype=complex)), dims)


def pure_state(vec, dims) -> DensityMatrix:
    v = np.asarray(vec, dtype=complex)
    v = v / np.linalg.norm(v)
    return DensityMatrix(np.outer(v, v.conj()), dims)


def bell_state() -> DensityMatrix:
    """|Phi+><Phi+| on two qubits."""
    return pure_state([1, 0, 0, 1], (2, 2))


def product_state(rho_a, rho_b) -> DensityMatrix:
    a = np.asarray(getattr(rho_a, "entries", rho_a), dtype=complex)
    b = np.asarray(getattr(rho_b, "entries", rho_b), dtype=complex)
    return DensityMatrix(np.kron(a, b), (a.shape[0], b.shape[0]))


def maximally_mixed(dims) -> DensityMatrix:
    d = dims[0] * dims[1]
    return DensityMatrix(np.eye(d) / d, dims)


def _ptrace(m: np.ndarray, dims, keep: str) -> np.ndarray:
    d_a, d_b = dims
    t = m.reshape(d_a, d_b, d_a, d_b)
    if keep == "A":
        return np.einsum("ijkj->ik", t)
    if keep == "B":
        return np.einsum("ijil->jl", t)
    raise DomainError(f"keep must be 'A' or 'B', not {keep!r}")


def partial_trace(rho: DensityMatrix, keep: str = "A") -> DensityMatrix:
    """Reduced state on subsystem ``keep``."""
    red = _ptrace(rho.entries, rho.dims, keep)
    dim = red.shape[0]
    return DensityMatrix(red, (dim, 1))


def marginal_entropies(rho: DensityMatrix) -> tuple[float, float]:
    return partial_trace(rho, "A").entropy(), partial_trace(rho, "B").entropy()


def qmi(rho: DensityMatrix) -> float:
    """Quantum mutual information S(A) + S(B) - S(AB) in bits."""
    s_a, s_b = marginal_entropies(rho)
    return s_a + s_b - rho.entropy()


def marginal_point(rho: DensityMatrix) -> MarginalPoint:
    if rho.dims != (2, 2):
        raise DimensionError(f"marginal_point needs a two-qubit state, got dims {rho.dims}")
    la = np.linalg.eigvalsh(_ptrace(rho.entries, rho.dims, "A"))[0]
    lb = np.linalg.eigvalsh(_ptrace(rho.entries, rho.dims, "B"))[0]
    return MarginalPoint(float(np.clip(la, 0.0, 0.5)), float(np.clip(lb, 0.0, 0.5)))


def energy(rho: DensityMatrix, hamiltonian) -> float:
    h = np.asarray(getattr(hamiltonian, "entries", hamiltonian), dtype=complex)
    if h.shape != rho.entries.shape:
        raise DimensionError(f"Hamiltonian shape {h.shape} vs state shape {rho.entries.shape}")
    e = np.trace(rho.entries @ h)
    if abs(e.imag) > 1e-10:
        raise DomainError("Hamiltonian is not Hermitian")
    return float(e.real)


def local_hamiltonian(d_a: int = 2, d_b: int = 2) -> np.ndarray:
    """H_A + H_B with unit level spacing: |i j> has energy i + j."""
    return np.diag([float(i + j) for i in range(d_a) for j in range(d_b)]).astype(complex)


def t_matrix(rho: DensityMatrix) -> np.ndarray:
    """Correlation matrix t_ij = Tr(sigma_i (x) sigma_j rho) for the Pauli triple (X, Y, Z)."""
    if rho.dims != (2, 2):
        raise DimensionError("T-matrix is defined for two qubits")
    paulis = (PAULI_X, PAULI_Y, PAULI_Z)
    return np.array(
        [[np.trace(np.kron(si, sj) @ rho.entries).real for sj in paulis] for si in paulis]
    )


def swap_subsystems(rho: DensityMatrix) -> DensityMatrix:
    d_a, d_b = rho.dims
    t = rho.entries.reshape(d_a, d_b, d_a, d_b).transpose(1, 0, 3, 2)
    return DensityMatrix(t.reshape(d_a * d_b, d_a * d_b), (d_b, d_a))


@dataclass(frozen=True)
class XState:
    """Two-qubit state with weight only on the diagonal and anti-diagonal.

    ``alpha, delta`` are the eigenvalues living in span{|00>, |11>} and
    ``beta, gamma`` those in span{|01>, |10>}; the cosines set how far each
    pair is rotated away from the computational basis.
    """

    alpha: float
    beta: float
    gamma: float
    delta: float
    cos_theta: float = 1.0
    cos_phi: float = 1.0

    def __post_init__(self):
        if abs(self.alpha + self.beta + self.gamma + self.delta - 1) > 1e-12:
            raise DomainError("X-state weights must sum to 1")
        if min(self.alpha, self.beta, self.gamma, self.delta) < -1e-12:
            raise DomainError("X-state weights must be non-negative")
        for c in (self.cos_theta, self.cos_phi):
            if abs(c) > 1 + 1e-12:
                raise DomainError(f"cosine {c} outside [-1, 1]")

    def matrix(self) -> np.ndarray:
        a, b, g, d = self.alpha, self.beta, self.gamma, self.delta
        ct = float(np.clip(self.cos_theta, -1, 1))
        cp = float(np.clip(self.cos_phi, -1, 1))
        st, sp = np.sqrt(1 - ct * ct), np.sqrt(1 - cp * cp)
        m = np.zeros((4, 4))
        m[0, 0] = a + d + (a - d) * cp
        m[3, 3] = a + d - (a - d) * cp
        m[0, 3] = m[3, 0] = (d - a) * sp
        m[1, 1] = b + g + (b - g) * ct
        m[2, 2] = b + g - (b - g) * ct
        m[1, 2] = m[2, 1] = (g - b) * st
        return 0.5 * m

    def materialize(self) -> DensityMatrix:
        return DensityMatrix(self.matrix(), (2, 2))

    def excited_populations(self) -> tuple[float, float]:
        """Populations of |1> in each marginal (the marginals are diagonal)."""
        bg = (self.beta - self.gamma) * self.cos_theta
        ad = (self.alpha - self.delta) * self.cos_phi
        return 0.5 * (1 - bg - ad), 0.5 * (1 + bg - ad)


def x_state_marginals(x: XState) -> MarginalPoint:
    """Closed-form smallest marginal eigenvalues of an X-state.

    The closed form gives the excited-state population of each qubit; the
    smaller eigenvalue is min(e, 1 - e) whichever ordering the weights have.
    """
    p_a, p_b = x.excited_populations()
    fold = lambda e: float(np.clip(min(e, 1.0 - e), 0.0, 0.5))
    return MarginalPoint(fold(p_a), fold(p_b))


def batch_marginal_points(mats: np.ndarray) -> np.ndarray:
    """Smallest marginal eigenvalues for a stack of 4x4 two-qubit matrices, shape (n, 2)."""
    t = mats.reshape(-1, 2, 2, 2, 2)
    out = []
    for red in (np.einsum("nijkj->nik", t), np.einsum("nijil->njl", t)):
        a, d = red[:, 0, 0].real, red[:, 1, 1].real
        off = np.abs(red[:, 0, 1])
        out.append(0.5 * ((a + d) - np.sqrt((a - d) ** 2 + 4 * off**2)))
    return np.clip(np.stack(out, axis=1), 0.0, 0.5)


def batch_qmi(mats: np.ndarray, dims, global_entropy: float | None = None) -> np.ndarray:
    """QMI for a stack of density matrices sharing ``dims``."""
    d_a, d_b = dims
    t = mats.reshape(-1, d_a, d_b, d_a, d_b)
    s_a = entropy_rows(np.linalg.eigvalsh(np.einsum("nijkj->nik", t)))
    s_b = entropy_rows(np.linalg.eigvalsh(np.einsum("nijil->njl", t)))
    if global_entropy is None:
        s = entropy_rows(np.linalg.eigvalsh(mats))
    else:
        s = global_entropy
    return s_a + s_b - s
