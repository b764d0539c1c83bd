"""Majorization, the see-saw relation between swap-adjacent Young tables, and its graphs.

Edge convention: ``i -> j`` in the row graph means a^(i) majorizes a^(j)
for every spectrum.  A single swap between a lower-left cell (r, s) and an
upper-right cell (t, u) moves delta = tau_tu - tau_rs from row t to row r,
so the row MPV flattens when delta > 0 and the column MPV sharpens.
"""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass

import networkx as nx
import numpy as np

from .errors import DimensionError, DomainError, PreconditionError
from .spectra import Spectrum, shannon_entropy
from .tableaux import Table, enumerate_young, is_young_pattern, marginals, parse_shape, table_mi

MAJ_TOL = 1e-10


def majorizes(p, q, tol: float = MAJ_TOL) -> bool:
    """True iff p majorizes q: descending partial sums of p dominate those of q."""
    p = np.asarray(p, dtype=float).ravel()
    q = np.asarray(q, dtype=float).ravel()
    if p.shape != q.shape:
        raise DimensionError(f"length mismatch {p.size} vs {q.size}")
    cp = np.cumsum(-np.sort(-p))
    cq = np.cumsum(-np.sort(-q))
    return bool((cp >= cq - tol).all() and abs(cp[-1] - cq[-1]) <= tol)


def in_convex_hull(sigma_spectrum, rho_spectrum) -> bool:
    """sigma lies in the convex hull of rho's unitary orbit iff spec(sigma) is majorized by spec(rho)."""
    s = getattr(sigma_spectrum, "values", sigma_spectrum)
    r = getattr(rho_spectrum, "values", rho_spectrum)
    return majorizes(r, s)


@dataclass(frozen=True)
class Swap:
    """Exchange of the lower-left cell (r, s) with the upper-right cell (t, u)."""

    r: int
    s: int
    t: int
    u: int
    target: tuple[int, ...]
    target_label: int | None = None

    def as_tuple(self):
        return (self.r, self.s, self.t, self.u)


def _swapped(pattern: np.ndarray, r, s, t, u) -> np.ndarray:
    out = pattern.copy()
    out[r, s], out[t, u] = pattern[t, u], pattern[r, s]
    return out


def valid_swaps(pattern, shape=None) -> list[Swap]:
    """All swaps with r > t, s < u whose result is again a member of the Young set.

    For square shapes a result that is only the transpose of a member is left
    out, since transposing exchanges the roles of the row and column MPVs.
    """
    pat = np.asarray(pattern, dtype=int)
    if not is_young_pattern(pat):
        raise PreconditionError(f"pattern {pat.tolist()} is not a Young pattern")
    shape = parse_shape(shape or pat.shape)
    ys = enumerate_young(shape)
    members = set(ys.patterns)
    d_a, d_b = shape
    out = []
    for r in range(d_a):
        for t in range(r):
            for s in range(d_b):
                for u in range(s + 1, d_b):
                    new = _swapped(pat, r, s, t, u)
                    key = tuple(new.ravel())
                    if key in members:
                        out.append(Swap(r, s, t, u, key, ys.patterns.index(key) + 1))
    return out


def _swap_between(p_i: np.ndarray, p_j: np.ndarray):
    diff = np.argwhere(p_i != p_j)
    if len(diff) != 2:
        return None
    (r1, c1), (r2, c2) = diff
    if p_i[r1, c1] != p_j[r2, c2] or p_i[r2, c2] != p_j[r1, c1]:
        return None
    # lower-left cell first
    if r1 < r2:
        (r1, c1), (r2, c2) = (r2, c2), (r1, c1)
    if not (r1 > r2 and c1 < c2):
        return None
    return int(r1), int(c1), int(r2), int(c2)


@dataclass(frozen=True)
class SeeSawReport:
    swap: tuple[int, int, int, int]
    delta: float
    a_i: np.ndarray
    a_j: np.ndarray
    b_i: np.ndarray
    b_j: np.ndarray
    a_relation: bool
    b_relation: bool
    entropy_relation: bool
    degenerate: bool

    @property
    def holds(self) -> bool:
        return self.a_relation and self.b_relation and self.entropy_relation


def see_saw_check(pattern_i, pattern_j, spectrum: Spectrum, tol: float = MAJ_TOL) -> SeeSawReport:
    """Verify the see-saw relation for two swap-adjacent patterns.

    For delta = tau_tu - tau_rs > 0 (values of table I) it checks
    a^J < a^I, b^J > b^I, H(a^J) >= H(a^I) and H(b^J) <= H(b^I); for
    delta < 0 the mirror statements.  delta = 0 demands equal MPVs.
    """
    p_i = np.asarray(pattern_i, dtype=int)
    p_j = np.asarray(pattern_j, dtype=int)
    if p_i.shape != p_j.shape or p_i.shape != spectrum.dims:
        raise DimensionError("patterns and spectrum must share one shape")
    sw = _swap_between(p_i, p_j)
    if sw is None:
        raise PreconditionError("patterns are not related by one lower-left/upper-right swap")
    r, s, t, u = sw
    ti, tj = Table.from_pattern(spectrum, p_i), Table.from_pattern(spectrum, p_j)
    delta = float(ti.entries[t, u] - ti.entries[r, s])
    a_i, b_i = marginals(ti)
    a_j, b_j = marginals(tj)
    ha_i, ha_j = shannon_entropy(a_i), shannon_entropy(a_j)
    hb_i, hb_j = shannon_entropy(b_i), shannon_entropy(b_j)
    degenerate = abs(delta) <= tol
    if degenerate:
        a_rel = bool(np.abs(np.sort(a_i) - np.sort(a_j)).max() <= tol)
        b_rel = bool(np.abs(np.sort(b_i) - np.sort(b_j)).max() <= tol)
        h_rel = abs(ha_i - ha_j) <= 1e-9 and abs(hb_i - hb_j) <= 1e-9
    elif delta > 0:
        a_rel, b_rel = majorizes(a_i, a_j, tol), majorizes(b_j, b_i, tol)
        h_rel = ha_j >= ha_i - 1e-12 and hb_j <= hb_i + 1e-12
    else:
        a_rel, b_rel = majorizes(a_j, a_i, tol), majorizes(b_i, b_j, tol)
        h_rel = ha_j <= ha_i + 1e-12 and hb_j >= hb_i - 1e-12
    return SeeSawReport(sw, delta, a_i, a_j, b_i, b_j, a_rel, b_rel, bool(h_rel), degenerate)


@dataclass(frozen=True)
class TableGraph:
    shape: tuple[int, int]
    kind: str
    graph: nx.DiGraph

    @property
    def nodes(self) -> list[int]:
        return sorted(self.graph.nodes)

    @property
    def edges(self) -> list[tuple[int, int]]:
        return sorted(self.graph.edges)

    def closure(self) -> set[tuple[int, int]]:
        return set(nx.transitive_closure_dag(self.graph).edges)

    def is_acyclic(self) -> bool:
        return nx.is_directed_acyclic_graph(self.graph)

    def has_path(self, i: int, j: int) -> bool:
        return nx.has_path(self.graph, i, j)

    def reversed(self) -> TableGraph:
        return TableGraph(self.shape, "col" if self.kind == "row" else "row", self.graph.reverse(copy=True))


def _row_edges(patterns: list[np.ndarray]) -> list[tuple[int, int]]:
    """Row-MPV majorization edges among swap-adjacent members of ``patterns`` (1-based labels)."""
    index = {tuple(p.ravel()): k + 1 for k, p in enumerate(patterns)}
    d_a, d_b = patterns[0].shape
    edges = []
    for i, p in enumerate(patterns, start=1):
        for r in range(d_a):
            for t in range(r):
                for s in range(d_b):
                    for u in range(s + 1, d_b):
                        j = index.get(tuple(_swapped(p, r, s, t, u).ravel()))
                        if j is None:
                            continue
                        # smaller rank = larger value, so delta > 0 iff rank(t, u) < rank(r, s)
                        edges.append((i, j) if p[t, u] < p[r, s] else (j, i))
    return sorted(set(edges))


def build_graph(shape, kind: str = "row") -> TableGraph:
    """Directed see-saw graph over the Young set.

    ``kind='row'`` orders row MPVs.  ``kind='col'`` orders column MPVs and is
    built independently by applying the row rule to the transposed patterns.
    """
    if kind not in ("row", "col"):
        raise DomainError(f"kind must be 'row' or 'col', not {kind!r}")
    shape = parse_shape(shape)
    ys = enumerate_young(shape)
    pats = [ys.pattern(i) for i in range(1, len(ys) + 1)]
    if kind == "col":
        pats = [p.T.copy() for p in pats]
    g = nx.DiGraph()
    g.add_nodes_from(range(1, len(ys) + 1))
    g.add_edges_from(_row_edges(pats))
    return TableGraph(shape, kind, g)


def to_dot(tg: TableGraph) -> str:
    d = tg.shape[0] * tg.shape[1]
    lines = ["// schema_version: 1", f'digraph "G_{tg.kind}_Y{d}" {{']
    for n in tg.nodes:
        lines.append(f'  {n} [label="T_{d}^({n})"];')
    for a, b in tg.edges:
        lines.append(f"  {a} -> {b};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def to_csv(tg: TableGraph) -> str:
    buf = io.StringIO()
    buf.write("# schema_version: 1\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["source", "target"])
    w.writerows(tg.edges)
    return buf.getvalue()


@dataclass(frozen=True)
class LemmaReport:
    variant: int
    k: int
    table_1: Table
    table_2: Table
    qmi_1: float
    qmi_2: float

    @property
    def holds(self) -> bool:
        return self.qmi_1 <= self.qmi_2 + 1e-12


def lemma_supports(spectrum: Spectrum, shape=None, variant: int = 1) -> LemmaReport:
    """Compare the row-major sorted table with the one that swaps p_k and p_{k+1}.

    k is the first-row length.  Variant 1 needs p_i = 0 for i > k, variant 2
    for i > k + 1.
    """
    shape = parse_shape(shape or spectrum.dims)
    if shape != spectrum.dims:
        spectrum = Spectrum(spectrum.values, shape)
    d_a, k = shape
    if d_a < 2:
        raise DimensionError("need at least two rows")
    if variant not in (1, 2):
        raise DomainError("variant must be 1 or 2")
    support = k if variant == 1 else k + 1
    tail = spectrum.values[support:]
    if tail.size and tail.max() > 1e-12:
        raise PreconditionError(f"variant {variant} needs p_i = 0 for i > {support}; support is larger")
    t1 = spectrum.values.reshape(shape)
    t2 = t1.copy()
    t2[0, k - 1], t2[1, 0] = t1[1, 0], t1[0, k - 1]
    a, b = Table(t1), Table(t2)
    return LemmaReport(variant, k, a, b, table_mi(a), table_mi(b))
