"""Tables of eigenvalues, Young tableau patterns and minimal/maximal table search.

A *pattern* is a ``d_A x d_B`` integer array holding the ranks ``1..d`` of a
spectrum, rank 1 being the largest eigenvalue.  Filling a pattern with a
sorted spectrum gives a :class:`Table`.  In a Young pattern the ranks
increase along every row and column, so the values are non-increasing.
"""
from __future__ import annotations

import itertools
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .errors import BudgetExceeded, DimensionError, DomainError
from .spectra import Spectrum, entropy_rows, shannon_entropy, sort_desc

YOUNG_BUDGET = 16
EXHAUSTIVE_BUDGET = 9
TIE_TOL = 1e-12

# Reference labelling of the index patterns, flattened row-major.
CATALOG = {
    (2, 3): [
        (1, 2, 3, 4, 5, 6),
        (1, 2, 4, 3, 5, 6),
        (1, 2, 5, 3, 4, 6),
        (1, 3, 5, 2, 4, 6),
        (1, 3, 4, 2, 5, 6),
    ],
    (3, 3): [
        (1, 2, 3, 4, 5, 6, 7, 8, 9),
        (1, 2, 3, 4, 5, 7, 6, 8, 9),
        (1, 2, 3, 4, 5, 8, 6, 7, 9),
        (1, 2, 3, 4, 6, 7, 5, 8, 9),
        (1, 2, 3, 4, 6, 8, 5, 7, 9),
        (1, 2, 4, 3, 5, 6, 7, 8, 9),
        (1, 2, 5, 3, 4, 6, 7, 8, 9),
        (1, 2, 4, 3, 5, 7, 6, 8, 9),
        (1, 2, 4, 3, 5, 8, 6, 7, 9),
        (1, 2, 5, 3, 4, 7, 6, 8, 9),
        (1, 2, 5, 3, 4, 8, 6, 7, 9),
        (1, 2, 6, 3, 4, 8, 5, 7, 9),
        (1, 2, 6, 3, 4, 7, 5, 8, 9),
        (1, 2, 7, 3, 4, 8, 5, 6, 9),
        (1, 2, 4, 3, 6, 7, 5, 8, 9),
        (1, 2, 4, 3, 6, 8, 5, 7, 9),
        (1, 2, 6, 3, 5, 8, 4, 7, 9),
        (1, 2, 6, 3, 5, 7, 4, 8, 9),
        (1, 2, 7, 3, 5, 8, 4, 6, 9),
        (1, 2, 5, 3, 6, 8, 4, 7, 9),
        (1, 2, 5, 3, 6, 7, 4, 8, 9),
    ],
}

# The maximal classical arrangement for a 2x3 table.
MAX_CLASSICAL_2x3 = ((1, 4, 5), (6, 3, 2))


def parse_shape(shape) -> tuple[int, int]:
    """Accept ``(2, 3)`` or ``"2x3"``."""
    if isinstance(shape, str):
        parts = shape.lower().split("x")
        if len(parts) != 2:
            raise DomainError(f"shape {shape!r} is not of the form AxB")
        shape = tuple(int(p) for p in parts)
    d_a, d_b = (int(x) for x in shape)
    if d_a < 1 or d_b < 1:
        raise DomainError(f"bad shape {shape}")
    return d_a, d_b


@dataclass(frozen=True, eq=False)
class Table:
    """A d_A x d_B arrangement of a spectrum's values."""

    entries: np.ndarray

    def __post_init__(self):
        t = np.array(self.entries, dtype=float)
        if t.ndim != 2:
            raise DimensionError("table entries must be a 2-D array")
        if np.any(t < -1e-12):
            raise DomainError("table has negative entries")
        if abs(t.sum() - 1.0) > 1e-12:
            raise DomainError(f"table entries sum to {t.sum()!r}, not 1")
        t.setflags(write=False)
        object.__setattr__(self, "entries", t)

    @property
    def shape(self) -> tuple[int, int]:
        return self.entries.shape

    @classmethod
    def from_pattern(cls, spectrum: Spectrum, pattern) -> Table:
        pat = np.asarray(pattern, dtype=int)
        if pat.shape != spectrum.dims:
            raise DimensionError(f"pattern shape {pat.shape} vs spectrum dims {spectrum.dims}")
        return cls(spectrum.values[pat - 1])

    def values(self) -> np.ndarray:
        return sort_desc(self.entries.ravel())

    def matches(self, spectrum: Spectrum, tol: float = 1e-12) -> bool:
        v = self.values()
        return v.size == spectrum.d and bool(np.abs(v - spectrum.values).max() <= tol)

    def __repr__(self):
        rows = "; ".join(" ".join(f"{x:.6g}" for x in r) for r in self.entries)
        return f"Table([{rows}])"


def marginals(table: Table) -> tuple[np.ndarray, np.ndarray]:
    """Row MPV ``a`` and column MPV ``b``."""
    return table.entries.sum(axis=1), table.entries.sum(axis=0)


def table_mi(table: Table) -> float:
    """H(a) + H(b) - H(entries) in bits."""
    a, b = marginals(table)
    return shannon_entropy(a) + shannon_entropy(b) - shannon_entropy(table.entries.ravel())


def is_young(entries, tol: float = 0.0) -> bool:
    """Values non-increasing along every row and column."""
    t = np.asarray(getattr(entries, "entries", entries), dtype=float)
    return bool((np.diff(t, axis=0) <= tol).all() and (np.diff(t, axis=1) <= tol).all())


def is_young_pattern(pattern) -> bool:
    p = np.asarray(pattern)
    return bool((np.diff(p, axis=0) > 0).all() and (np.diff(p, axis=1) > 0).all())


def sort_table(table: Table, max_iter: int = 1000) -> Table:
    """Alternate column and row descending sorts until nothing moves."""
    t = np.array(table.entries)
    for _ in range(max_iter):
        new = -np.sort(-t, axis=0)
        new = -np.sort(-new, axis=1)
        if np.array_equal(new, t):
            break
        t = new
    return Table(t)


def hook_count(shape) -> int:
    """Number of standard Young tableaux of a rectangular d_A x d_B shape."""
    d_a, d_b = parse_shape(shape)
    num = math.factorial(d_a * d_b) * math.prod(math.factorial(i) for i in range(1, d_b))
    den = math.prod(math.factorial(j) for j in range(d_a, d_a + d_b))
    return num // den


def _standard_tableaux(d_a: int, d_b: int):
    rows = [[] for _ in range(d_a)]

    def place(k):
        if k > d_a * d_b:
            yield tuple(x for r in rows for x in r)
            return
        for i in range(d_a):
            if len(rows[i]) < d_b and (i == 0 or len(rows[i - 1]) > len(rows[i])):
                rows[i].append(k)
                yield from place(k + 1)
                rows[i].pop()

    yield from place(1)


@dataclass(frozen=True)
class YoungSet:
    """Independent Young patterns of one shape (transposes removed for square shapes)."""

    shape: tuple[int, int]
    patterns: tuple[tuple[int, ...], ...]
    catalog_order: bool = False

    def __len__(self):
        return len(self.patterns)

    def arrays(self) -> np.ndarray:
        """Patterns as an (n, d_A, d_B) integer array."""
        return np.array(self.patterns, dtype=int).reshape(-1, *self.shape)

    def label(self, pattern) -> int:
        """1-based position of ``pattern`` in this set."""
        key = tuple(int(x) for x in np.asarray(pattern).ravel())
        try:
            return self.patterns.index(key) + 1
        except ValueError:
            raise DomainError(f"pattern {key} is not in Y for shape {self.shape}") from None

    def pattern(self, label: int) -> np.ndarray:
        return np.array(self.patterns[label - 1]).reshape(self.shape)


@lru_cache(maxsize=None)
def enumerate_young(shape) -> YoungSet:
    """All standard Young patterns of a rectangular shape.

    For square shapes only the member of each transpose pair with rank 2 in
    position (0, 1) is kept.  Shapes listed in CATALOG come back in
    catalog order; others in lexicographic order of the flattened pattern.
    """
    d_a, d_b = parse_shape(shape)
    if d_a * d_b > YOUNG_BUDGET:
        raise BudgetExceeded(f"d = {d_a * d_b} exceeds the enumeration budget of {YOUNG_BUDGET}")
    pats = list(_standard_tableaux(d_a, d_b))
    if d_a == d_b and d_a > 1:
        pats = [p for p in pats if p[1] == 2]
    pats.sort()
    catalog = CATALOG.get((d_a, d_b))
    ordered = catalog is not None and set(catalog) == set(pats)
    if ordered:
        pats = list(catalog)
    return YoungSet((d_a, d_b), tuple(pats), ordered)


def _flatten_patterns(patterns) -> np.ndarray:
    return np.asarray(patterns, dtype=int).reshape(len(patterns), -1) - 1


def pattern_entropy_sums(spectra: np.ndarray, patterns, shape) -> np.ndarray:
    """H(a) + H(b) for every (spectrum, pattern) pair, shape (n_spectra, n_patterns).

    ``spectra`` rows must be sorted non-increasing.
    """
    d_a, d_b = shape
    spectra = np.atleast_2d(np.asarray(spectra, dtype=float))
    idx = _flatten_patterns(patterns)
    out = np.empty((spectra.shape[0], idx.shape[0]))
    for j, ix in enumerate(idx):
        t = spectra[:, ix].reshape(-1, d_a, d_b)
        out[:, j] = entropy_rows(t.sum(axis=2)) + entropy_rows(t.sum(axis=1))
    return out


def young_mi_values(spectrum: Spectrum, shape=None) -> np.ndarray:
    """Table MI of every Young pattern, in YoungSet order."""
    shape = parse_shape(shape or spectrum.dims)
    ys = enumerate_young(shape)
    return pattern_entropy_sums(spectrum.values, ys.patterns, shape)[0] - spectrum.entropy


@dataclass(frozen=True)
class TableOptimum:
    table: Table
    value: float
    pattern: np.ndarray
    label: int | None = None
    ties: tuple[int, ...] = ()
    young_restricted: bool = False

    def __iter__(self):
        yield self.table
        yield self.value


def _as_spectrum(spectrum, shape) -> Spectrum:
    if isinstance(spectrum, Spectrum):
        if shape is not None and parse_shape(shape) != spectrum.dims:
            return Spectrum(spectrum.values, parse_shape(shape))
        return spectrum
    if shape is None:
        raise DimensionError("shape required for a raw probability vector")
    return Spectrum(spectrum, parse_shape(shape))


def minimal_table(spectrum, shape=None) -> TableOptimum:
    """Young pattern minimising the table MI.

    Ties (within 1e-12) go to the lexicographically smallest pattern and are
    listed in ``ties`` by label.  For d > 9 the result is flagged as a
    Young-restricted optimum.
    """
    spec = _as_spectrum(spectrum, shape)
    ys = enumerate_young(spec.dims)
    vals = young_mi_values(spec)
    best = vals.min()
    tied = [i for i in range(len(ys)) if vals[i] <= best + TIE_TOL]
    pick = min(tied, key=lambda i: ys.patterns[i])
    pat = ys.pattern(pick + 1)
    return TableOptimum(
        table=Table.from_pattern(spec, pat),
        value=float(vals[pick]),
        pattern=pat,
        label=pick + 1,
        ties=tuple(i + 1 for i in tied if i != pick),
        young_restricted=spec.d > EXHAUSTIVE_BUDGET,
    )


@lru_cache(maxsize=4)
def all_permutations(d: int) -> np.ndarray:
    """All d! index permutations (0-based) as a read-only int8 array."""
    if d > EXHAUSTIVE_BUDGET:
        raise BudgetExceeded(f"{d}! permutations exceed the exhaustive budget (d <= {EXHAUSTIVE_BUDGET})")
    p = np.array(list(itertools.permutations(range(d))), dtype=np.int8)
    p.setflags(write=False)
    return p


def _all_table_entropy_sums(spec: Spectrum) -> tuple[np.ndarray, np.ndarray]:
    d_a, d_b = spec.dims
    perms = all_permutations(spec.d)
    out = np.empty(perms.shape[0])
    step = 1 << 16
    for s in range(0, perms.shape[0], step):
        t = spec.values[perms[s : s + step]].reshape(-1, d_a, d_b)
        out[s : s + step] = entropy_rows(t.sum(axis=2)) + entropy_rows(t.sum(axis=1))
    return perms, out


def exhaustive_extremum(spectrum, shape=None, kind: str = "min") -> TableOptimum:
    """Search all d! arrangements (d <= 9) for the minimal or maximal table MI."""
    spec = _as_spectrum(spectrum, shape)
    perms, sums = _all_table_entropy_sums(spec)
    if kind == "min":
        i = int(np.argmin(sums))
    elif kind == "max":
        i = int(np.argmax(sums))
    else:
        raise DomainError(f"kind must be 'min' or 'max', not {kind!r}")
    pat = perms[i].astype(int).reshape(spec.dims) + 1
    return TableOptimum(Table.from_pattern(spec, pat), float(sums[i] - spec.entropy), pat)


def max_classical_table(spectrum, shape=None) -> TableOptimum:
    return exhaustive_extremum(spectrum, shape, kind="max")


def _symmetry_group(shape) -> np.ndarray:
    """Position permutations generated by row swaps, column swaps and (square) transpose."""
    d_a, d_b = shape
    grid = np.arange(d_a * d_b).reshape(d_a, d_b)
    out = []
    for rp in itertools.permutations(range(d_a)):
        for cp in itertools.permutations(range(d_b)):
            g = grid[np.ix_(rp, cp)]
            out.append(g.ravel())
            if d_a == d_b:
                out.append(g.T.ravel())
    return np.unique(np.array(out), axis=0)


def canonical_codes(perms: np.ndarray, shape) -> np.ndarray:
    """Smallest base-d code of each arrangement over its symmetry orbit."""
    d = shape[0] * shape[1]
    group = _symmetry_group(shape)
    weights = d ** np.arange(d - 1, -1, -1, dtype=np.int64)
    perms = np.atleast_2d(perms)
    best = np.full(perms.shape[0], np.iinfo(np.int64).max)
    for g in group:
        best = np.minimum(best, perms[:, g].astype(np.int64) @ weights)
    return best


def same_symmetry_class(p, q, shape) -> bool:
    shape = parse_shape(shape)
    arr = np.array([np.asarray(p).ravel(), np.asarray(q).ravel()]) - 1
    c = canonical_codes(arr, shape)
    return bool(c[0] == c[1])


@dataclass(frozen=True)
class SymmetryClasses:
    shape: tuple[int, int]
    perms: np.ndarray = field(repr=False)
    labels: np.ndarray = field(repr=False)
    count: int = 0

    def members(self, k: int) -> np.ndarray:
        """Index patterns (1-based ranks) in class ``k``."""
        return self.perms[self.labels == k].astype(int).reshape(-1, *self.shape) + 1


def symmetry_classes(shape) -> SymmetryClasses:
    """Partition all d! arrangements into orbits of the table-MI symmetry group."""
    shape = parse_shape(shape)
    perms = all_permutations(shape[0] * shape[1])
    codes = canonical_codes(perms, shape)
    _, labels = np.unique(codes, return_inverse=True)
    return SymmetryClasses(shape, perms, labels, int(labels.max()) + 1)


@dataclass(frozen=True)
class Histogram:
    shape: tuple[int, int]
    counts: np.ndarray
    ties: int
    n_samples: int
    seed: int

    def modal_label(self) -> int:
        return int(np.argmax(self.counts)) + 1


def _resolve_threads(threads) -> int:
    if threads is None:
        threads = int(os.environ.get("ORBIT_THREADS", "1") or 1)
    return max(1, int(threads))


def histogram_minimizers(shape, n_samples: int, rng_seed: int, threads=None, chunk: int = 10_000) -> Histogram:
    """Count how often each Young pattern minimises the table MI over random spectra.

    Spectra are flat-Dirichlet, full rank.  Chunk ``k`` draws from the stream
    seeded by ``(rng_seed, k)`` so the counts do not depend on ``threads``.
    """
    shape = parse_shape(shape)
    d = shape[0] * shape[1]
    ys = enumerate_young(shape)
    # argmin returns the first hit, so evaluate patterns in lexicographic order
    lex = sorted(range(len(ys)), key=lambda i: ys.patterns[i])
    lex_patterns = [ys.patterns[i] for i in lex]
    lex = np.array(lex)

    def work(k):
        n = min(chunk, n_samples - k * chunk)
        rng = np.random.default_rng([rng_seed, k])
        lam = rng.dirichlet(np.ones(d), size=n)
        while (bad := lam.min(axis=1) <= 1e-9).any():
            lam[bad] = rng.dirichlet(np.ones(d), size=int(bad.sum()))
        lam = -np.sort(-lam, axis=1)
        sums = pattern_entropy_sums(lam, lex_patterns, shape)
        close = sums <= sums.min(axis=1, keepdims=True) + TIE_TOL
        first = lex[close.argmax(axis=1)]
        return np.bincount(first, minlength=len(ys)), int((close.sum(axis=1) > 1).sum())

    n_chunks = -(-n_samples // chunk)
    n_threads = _resolve_threads(threads)
    if n_threads > 1:
        with ThreadPoolExecutor(n_threads) as ex:
            parts = list(ex.map(work, range(n_chunks)))
    else:
        parts = [work(k) for k in range(n_chunks)]
    counts = np.zeros(len(ys), dtype=np.int64)
    ties = 0
    for c, t in parts:
        counts += c
        ties += t
    return Histogram(shape, counts, ties, n_samples, rng_seed)
