"""Maximally and minimally correlated states on a unitary orbit."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionError, DomainError, PreconditionError
from .spectra import Spectrum, binary_entropy
from .states import DensityMatrix
from .tableaux import Table, minimal_table, table_mi


@dataclass(frozen=True)
class OrbitExtremum:
    state: DensityMatrix
    qmi_value: float
    kind: str

    def to_dict(self) -> dict:
        return {"kind": self.kind, "qmi": self.qmi_value, "state": self.state.to_json()}


def clock_shift(d: int) -> tuple[np.ndarray, np.ndarray]:
    """Generalised Pauli shift X|j> = |j+1> and clock Z|j> = w^j |j>."""
    x = np.roll(np.eye(d, dtype=complex), 1, axis=0)
    z = np.diag(np.exp(2j * np.pi * np.arange(d) / d))
    return x, z


def bell_basis(d: int) -> np.ndarray:
    """Columns (I (x) X^m Z^n)|Phi+> ordered by k = m*d + n."""
    x, z = clock_shift(d)
    phi = np.eye(d, dtype=complex).ravel() / np.sqrt(d)
    cols = []
    for m in range(d):
        xm = np.linalg.matrix_power(x, m)
        for n in range(d):
            cols.append(np.kron(np.eye(d), xm @ np.linalg.matrix_power(z, n)) @ phi)
    return np.array(cols).T


def max_qmi_bound(dims) -> float:
    """Upper bound log2(d_A d_B) on the QMI, the only statement available for d_A != d_B."""
    return float(np.log2(dims[0] * dims[1]))


def rho_max(spectrum: Spectrum) -> OrbitExtremum:
    """Bell-diagonal state with the given spectrum; QMI = 2 log2 d_A - H(Lambda)."""
    d_a, d_b = spectrum.dims
    if d_a != d_b:
        raise PreconditionError(
            f"rho_max is only constructed for d_A = d_B; got {d_a}x{d_b} "
            f"(upper bound log2(d_A d_B) = {max_qmi_bound(spectrum.dims):.6g})"
        )
    basis = bell_basis(d_a)
    m = (basis * spectrum.values) @ basis.conj().T
    state = DensityMatrix(m, spectrum.dims)
    return OrbitExtremum(state, 2 * np.log2(d_a) - spectrum.entropy, "max")


def rho_min(spectrum: Spectrum, table) -> OrbitExtremum:
    """Classical state whose computational-basis populations are laid out by ``table``."""
    if not isinstance(table, Table):
        table = Table(table)
    if table.shape != spectrum.dims:
        raise DimensionError(f"table shape {table.shape} vs spectrum dims {spectrum.dims}")
    if not table.matches(spectrum):
        raise DomainError("table entries are not an arrangement of the spectrum")
    state = DensityMatrix(np.diag(table.entries.ravel()).astype(complex), spectrum.dims)
    return OrbitExtremum(state, table_mi(table), "min")


def sorted_table(spectrum: Spectrum) -> Table:
    """Row-major sorted arrangement (the only independent Young table for 2x2)."""
    return Table(spectrum.values.reshape(spectrum.dims))


def _require_two_qubit(spectrum: Spectrum):
    if spectrum.dims != (2, 2):
        raise DimensionError(f"two-qubit spectrum required, got dims {spectrum.dims}")


def two_qubit_min_qmi(spectrum: Spectrum) -> float:
    """I(rho_min) = H(l3 + l4) + H(l2 + l4) - H(Lambda)."""
    _require_two_qubit(spectrum)
    l1, l2, l3, l4 = spectrum.values
    return binary_entropy(l3 + l4) + binary_entropy(l2 + l4) - spectrum.entropy


def delta_i(spectrum: Spectrum) -> float:
    """Largest change of QMI on a two-qubit orbit: 2 - H(l1 + l2) - H(l1 + l3)."""
    _require_two_qubit(spectrum)
    l1, l2, l3, _ = spectrum.values
    return 2.0 - binary_entropy(l1 + l2) - binary_entropy(l1 + l3)


def check_on_orbit(state: DensityMatrix, spectrum: Spectrum, tol: float = 1e-9) -> bool:
    return bool(np.abs(state.eigenvalues() - spectrum.values).max() <= tol)


def extremal_report(spectrum: Spectrum) -> dict:
    """I_min, I_max and their difference for any shape within the Young budget."""
    best = minimal_table(spectrum)
    lo = rho_min(spectrum, best.table)
    out = {
        "dims": list(spectrum.dims),
        "spectrum": spectrum.values.tolist(),
        "I_min": lo.qmi_value,
        "min_table": best.table.entries.tolist(),
        "min_pattern": best.pattern.tolist(),
    }
    if spectrum.dims[0] == spectrum.dims[1]:
        hi = rho_max(spectrum)
        out["I_max"] = hi.qmi_value
        out["delta_i"] = hi.qmi_value - lo.qmi_value
    else:
        out["I_max_bound"] = max_qmi_bound(spectrum.dims)
    if spectrum.dims == (2, 2):
        out["delta_i_closed_form"] = delta_i(spectrum)
    return out
