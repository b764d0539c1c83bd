"""Probability-vector primitives: entropies, sorted spectra and simplex sampling.

All entropies are in bits.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionError, DomainError

NEG_TOL = 1e-12
SUM_TOL = 1e-12


def _clean(p) -> np.ndarray:
    p = np.asarray(p, dtype=float)
    if np.any(p < -NEG_TOL):
        raise DomainError(f"negative probability {p.min():.3g}")
    return np.clip(p, 0.0, None)


def shannon_entropy(p) -> float:
    """Shannon entropy -sum p log2 p with 0 log 0 = 0.

    The input is not renormalised; entries in [-1e-12, 0) are clamped to zero.
    """
    p = _clean(p)
    nz = p[p > 0]
    return float(-(nz * np.log2(nz)).sum())


def entropy_rows(p) -> np.ndarray:
    """Vectorised Shannon entropy over the last axis (no validation)."""
    p = np.clip(np.asarray(p, dtype=float), 0.0, None)
    safe = np.where(p > 0, p, 1.0)
    return -(p * np.log2(safe)).sum(axis=-1)


def binary_entropy(x: float) -> float:
    if x < -NEG_TOL or x > 1 + NEG_TOL:
        raise DomainError(f"binary entropy argument {x} outside [0, 1]")
    x = min(max(float(x), 0.0), 1.0)
    return shannon_entropy((x, 1.0 - x))


def sort_desc(p) -> np.ndarray:
    # stable sort keeps the relative order of tied entries
    p = np.asarray(p, dtype=float)
    order = np.argsort(-p, kind="stable")
    return p[order]


@dataclass(frozen=True, eq=False)
class Spectrum:
    """Global eigenvalues of a bipartite state, sorted non-increasing."""

    values: np.ndarray
    dims: tuple[int, int]

    def __post_init__(self):
        d_a, d_b = (int(x) for x in self.dims)
        if d_a < 1 or d_b < 1:
            raise DimensionError(f"bad dims {self.dims}")
        vals = sort_desc(_clean(self.values))
        if vals.size != d_a * d_b:
            raise DimensionError(f"{vals.size} values for dims {d_a}x{d_b}")
        if abs(vals.sum() - 1.0) > SUM_TOL:
            raise DomainError(f"spectrum sums to {vals.sum()!r}, not 1")
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)
        object.__setattr__(self, "dims", (d_a, d_b))

    @classmethod
    def from_weights(cls, weights, dims) -> Spectrum:
        """Normalise non-negative weights, e.g. (6, 5, 4, 3, 2, 1), into a spectrum."""
        w = _clean(weights)
        total = w.sum()
        if total <= 0:
            raise DomainError("weights must have positive sum")
        return cls(w / total, dims)

    @property
    def d(self) -> int:
        return self.dims[0] * self.dims[1]

    @property
    def entropy(self) -> float:
        return shannon_entropy(self.values)

    def __len__(self):
        return self.values.size

    def __getitem__(self, i):
        return self.values[i]

    def __eq__(self, other):
        if not isinstance(other, Spectrum):
            return NotImplemented
        return self.dims == other.dims and np.array_equal(self.values, other.values)

    def __hash__(self):
        return hash((self.dims, self.values.tobytes()))

    def __repr__(self):
        vals = ", ".join(f"{v:.6g}" for v in self.values)
        return f"Spectrum(({vals}), dims={self.dims})"


def as_rng(rng) -> np.random.Generator:
    if isinstance(rng, np.random.Generator):
        return rng
    return np.random.default_rng(rng)


def sample_simplex(n: int, d: int, rng, full_rank: bool = False) -> np.ndarray:
    """Draw ``n`` flat-Dirichlet points on the (d-1)-simplex, each sorted non-increasing.

    With ``full_rank`` any row whose smallest entry is <= 1e-9 is redrawn.
    """
    rng = as_rng(rng)
    out = rng.dirichlet(np.ones(d), size=n)
    if full_rank:
        bad = out.min(axis=1) <= 1e-9
        while bad.any():
            out[bad] = rng.dirichlet(np.ones(d), size=int(bad.sum()))
            bad = out.min(axis=1) <= 1e-9
    return -np.sort(-out, axis=1)


def sample_spectrum(d: int, rng_seed=None, full_rank: bool = False, dims=None) -> Spectrum:
    """Uniform random spectrum on the simplex (flat Dirichlet), sorted.

    ``dims`` defaults to ``(2, d // 2)`` for even ``d`` and ``(1, d)`` otherwise.
    """
    if d < 2:
        raise DomainError("need d >= 2")
    if dims is None:
        dims = (2, d // 2) if d % 2 == 0 else (1, d)
    vals = sample_simplex(1, d, rng_seed, full_rank=full_rank)[0]
    # renormalise away the last ulp so the sum invariant holds at 1e-12
    return Spectrum(vals / vals.sum(), dims)
