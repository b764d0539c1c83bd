"""Compatible marginal region R(Lambda) for two qubits and its energy-limited part.

Points are (lambda_A, lambda_B), the smaller eigenvalue of each marginal.
R is cut out of the square [0, 1/2]^2 by

    lambda_A >= l3 + l4
    lambda_B >= l3 + l4
    lambda_A + lambda_B >= l2 + l3 + 2 l4
    |lambda_A - lambda_B| <= min(l1 - l3, l2 - l4)
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .errors import DimensionError, DomainError, PreconditionError
from .spectra import Spectrum, binary_entropy
from .states import MarginalPoint

TOL = 1e-10


@dataclass(frozen=True)
class HalfPlane:
    """a * lambda_A + b * lambda_B >= c"""

    a: float
    b: float
    c: float
    label: str

    def slack(self, x, y):
        return self.a * np.asarray(x) + self.b * np.asarray(y) - self.c


def _spectrum4(spectrum) -> Spectrum:
    if not isinstance(spectrum, Spectrum):
        spectrum = Spectrum(spectrum, (2, 2))
    if spectrum.d != 4:
        raise DimensionError(f"two-qubit spectrum required, got d = {spectrum.d}")
    return spectrum


def constraints(spectrum: Spectrum, hull: bool = False) -> list[HalfPlane]:
    """Half-planes defining R, or its convex hull when the difference bound is dropped.

    Labels: ``A_floor``, ``B_floor``, ``sum_floor``, ``diff_AB``, ``diff_BA`` for the
    spectral inequalities and ``A_cap``, ``B_cap``, ``A_zero``, ``B_zero`` for the square.
    """
    l1, l2, l3, l4 = _spectrum4(spectrum).values
    m = min(l1 - l3, l2 - l4)
    out = [
        HalfPlane(1, 0, l3 + l4, "A_floor"),
        HalfPlane(0, 1, l3 + l4, "B_floor"),
        HalfPlane(1, 1, l2 + l3 + 2 * l4, "sum_floor"),
    ]
    if not hull:
        out += [HalfPlane(-1, 1, -m, "diff_AB"), HalfPlane(1, -1, -m, "diff_BA")]
    out += [
        HalfPlane(-1, 0, -0.5, "A_cap"),
        HalfPlane(0, -1, -0.5, "B_cap"),
        HalfPlane(1, 0, 0.0, "A_zero"),
        HalfPlane(0, 1, 0.0, "B_zero"),
    ]
    return out


def _inside(cons, x, y, tol=TOL):
    ok = np.ones(np.broadcast(np.asarray(x), np.asarray(y)).shape, dtype=bool)
    for h in cons:
        ok &= h.slack(x, y) >= -tol
    return ok


def _vertices(cons) -> list[tuple[float, float]]:
    pts = []
    for h, g in itertools.combinations(cons, 2):
        det = h.a * g.b - h.b * g.a
        if abs(det) < 1e-15:
            continue
        x = (h.c * g.b - h.b * g.c) / det
        y = (h.a * g.c - h.c * g.a) / det
        if _inside(cons, x, y):
            pts.append((float(x), float(y)))
    uniq = []
    for p in pts:
        if not any(abs(p[0] - q[0]) < 1e-12 and abs(p[1] - q[1]) < 1e-12 for q in uniq):
            uniq.append(p)
    if len(uniq) > 2:
        cx, cy = np.mean(uniq, axis=0)
        uniq.sort(key=lambda p: np.arctan2(p[1] - cy, p[0] - cx))
    return uniq


@dataclass(frozen=True)
class Region:
    """Polygon R(Lambda) (or its hull) with counterclockwise vertices."""

    spectrum: Spectrum
    vertices: tuple[MarginalPoint, ...]
    degenerate_flag: bool
    hull: bool = False

    @classmethod
    def from_spectrum(cls, spectrum, hull: bool = False) -> Region:
        spectrum = _spectrum4(spectrum)
        verts = _vertices(constraints(spectrum, hull))
        deg = abs(spectrum[1] - spectrum[2]) <= 1e-12
        return cls(spectrum, tuple(MarginalPoint(*v) for v in verts), bool(deg), hull)

    def constraints(self) -> list[HalfPlane]:
        return constraints(self.spectrum, self.hull)

    def vertex_array(self) -> np.ndarray:
        return np.array([v.as_tuple() for v in self.vertices]).reshape(-1, 2)

    def tight_labels(self, p, tol: float = TOL) -> list[str]:
        x, y = p.as_tuple() if isinstance(p, MarginalPoint) else p
        return [h.label for h in self.constraints() if abs(h.slack(x, y)) <= tol]

    def edges(self) -> list[dict]:
        """Boundary segments with the constraint that is tight along each."""
        v = self.vertex_array()
        if len(v) < 2:
            return []
        out = []
        for i in range(len(v)):
            p, q = v[i], v[(i + 1) % len(v)]
            if len(v) == 2 and i == 1:
                break
            tight = set(self.tight_labels(p)) & set(self.tight_labels(q))
            out.append({"start": p.tolist(), "end": q.tolist(), "tight": sorted(tight)})
        return out

    def area(self) -> float:
        v = self.vertex_array()
        if len(v) < 3:
            return 0.0
        x, y = v[:, 0], v[:, 1]
        return float(0.5 * (x @ np.roll(y, -1) - y @ np.roll(x, -1)))

    def to_dict(self) -> dict:
        return {
            "spectrum": self.spectrum.values.tolist(),
            "hull": self.hull,
            "degenerate_flag": self.degenerate_flag,
            "vertices": [
                {"lambda_a": v.lambda_a, "lambda_b": v.lambda_b, "tight": self.tight_labels(v)}
                for v in self.vertices
            ],
            "edges": self.edges(),
        }


def region(spectrum) -> Region:
    return Region.from_spectrum(spectrum)


def convex_hull_region(spectrum) -> Region:
    """Polygon with the difference bound dropped; contains R."""
    return Region.from_spectrum(spectrum, hull=True)


def _xy(p):
    if isinstance(p, MarginalPoint):
        return p.lambda_a, p.lambda_b
    return p[0], p[1]


def contains(reg: Region, p, tol: float = TOL) -> bool:
    x, y = _xy(p)
    return bool(_inside(reg.constraints(), x, y, tol))


def contains_many(reg: Region, pts, tol: float = TOL) -> np.ndarray:
    pts = np.asarray(pts, dtype=float).reshape(-1, 2)
    return _inside(reg.constraints(), pts[:, 0], pts[:, 1], tol)


def violations(spectrum, pts, tol: float = TOL) -> np.ndarray:
    """Number of spectral inequalities broken by each point (square bounds excluded)."""
    pts = np.asarray(pts, dtype=float).reshape(-1, 2)
    cons = [h for h in constraints(spectrum) if h.label not in {"A_cap", "B_cap", "A_zero", "B_zero"}]
    return sum((h.slack(pts[:, 0], pts[:, 1]) < -tol).astype(int) for h in cons)


def min_vertex(reg: Region) -> tuple[MarginalPoint, MarginalPoint]:
    """The two minimally correlated corners (l2 + l4, l3 + l4) and its mirror."""
    _, l2, l3, l4 = reg.spectrum.values
    return MarginalPoint(l2 + l4, l3 + l4), MarginalPoint(l3 + l4, l2 + l4)


def _check_energy(e):
    if e < -TOL or e > 1 + TOL:
        raise DomainError(f"energy {e} outside [0, 1]")


def energy_region_contains(reg: Region, p, e: float) -> bool:
    """Membership in R_E: inside R and lambda_A + lambda_B <= e."""
    _check_energy(e)
    x, y = _xy(p)
    return contains(reg, p) and x + y <= e + TOL


def f_line_intersections(e: float) -> tuple[tuple[float, float], ...]:
    """Corners of the diamond |x - 1/2| + |y - 1/2| <= 1 - e.

    Plain tuples rather than marginal points: for e < 1/2 they leave [0, 1/2]^2.
    """
    _check_energy(e)
    c = 1.0 - e
    return ((0.5, 0.5 - c), (0.5 - c, 0.5), (0.5 + c, 0.5), (0.5, 0.5 + c))


def f_line_points(s: float, t: float, e: float, n: int = 201) -> np.ndarray:
    """Points of the line y t + x s = (s + t)/2 - (1 - e) inside [0, 1]^2."""
    c = 1.0 - e
    rhs = 0.5 * (s + t) - c
    if max(abs(s), abs(t)) <= 1e-15:
        return np.empty((0, 2))
    with np.errstate(over="ignore"):
        if abs(t) >= abs(s):
            x = np.linspace(0, 1, n)
            y = (rhs - s * x) / t
        else:
            y = np.linspace(0, 1, n)
            x = (rhs - t * y) / s
    pts = np.column_stack([x, y])
    keep = np.isfinite(pts).all(axis=1) & (pts >= -1e-12).all(axis=1) & (pts <= 1 + 1e-12).all(axis=1)
    return pts[keep]


def in_open_diamond(pts, e: float, tol: float = 1e-12) -> np.ndarray:
    pts = np.asarray(pts, dtype=float).reshape(-1, 2)
    return np.abs(pts - 0.5).sum(axis=1) < (1.0 - e) - tol


def delta_i_energy(spectrum, e: float) -> float:
    """2 H(e/2) - H(l1 + l2) - H(l1 + l3); needs e >= l2 + l3 + 2 l4."""
    spectrum = _spectrum4(spectrum)
    _check_energy(e)
    l1, l2, l3, l4 = spectrum.values
    floor = l2 + l3 + 2 * l4
    if e < floor - TOL:
        raise PreconditionError(
            f"energy {e} < l2 + l3 + 2 l4 = {floor:.12g}: the minimally correlated vertex lies outside R_E"
        )
    return 2 * binary_entropy(min(e, 1.0) / 2) - binary_entropy(l1 + l2) - binary_entropy(l1 + l3)


def trace_infimum(op_eigenvalues, spectrum) -> float:
    """min over the orbit of Tr(rho O): pair the largest lambda with the smallest O eigenvalue."""
    o = np.sort(np.asarray(op_eigenvalues, dtype=float))
    lam = spectrum.values if isinstance(spectrum, Spectrum) else -np.sort(-np.asarray(spectrum, dtype=float))
    if o.size != lam.size:
        raise DimensionError(f"{o.size} operator eigenvalues vs {lam.size} spectrum entries")
    return float(o @ lam)


def membership_grid(spectrum, e: float = 1.0, n: int = 101) -> np.ndarray:
    """Rows (lambda_a, lambda_b, in_R, in_R_E, in_hull) over an n x n grid of [0, 1/2]^2."""
    spectrum = _spectrum4(spectrum)
    _check_energy(e)
    g = np.linspace(0.0, 0.5, n)
    xa, xb = np.meshgrid(g, g, indexing="ij")
    x, y = xa.ravel(), xb.ravel()
    in_r = _inside(constraints(spectrum), x, y)
    in_e = in_r & (x + y <= e + TOL)
    in_h = _inside(constraints(spectrum, hull=True), x, y)
    return np.column_stack([x, y, in_r, in_e, in_h]).astype(float)
