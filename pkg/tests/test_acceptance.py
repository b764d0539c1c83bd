"""Acceptance criteria, one test each.

Every test prints a ``CRITERION n: PASS|FAIL`` line (also collected into the
pytest terminal summary) and then asserts.  Run standalone with
``python tests/test_acceptance.py`` for just the twelve lines.
"""
import time

import numpy as np

from orbitqmi.collision import heat_flow_check, qutrit_counterexample, run_collisions, sample_heat_flow_pairs
from orbitqmi.extremal import delta_i, rho_max, two_qubit_min_qmi
from orbitqmi.majorization import build_graph, lemma_supports, see_saw_check
from orbitqmi.orbit_dynamics import coverage_distance, demon_scenario, orbit_samples
from orbitqmi.spectra import Spectrum
from orbitqmi.states import batch_marginal_points, batch_qmi, diagonal_state
from orbitqmi.tableaux import (
    CATALOG,
    enumerate_young,
    exhaustive_extremum,
    histogram_minimizers,
    hook_count,
    minimal_table,
)
from orbitqmi.two_qubit_region import violations

SEED = 20261016
LAMBDA = Spectrum((0.6, 0.3, 0.1, 0.0), (2, 2))
RESULTS = {}


def report(n, ok, detail, elapsed, limit):
    in_time = elapsed < limit
    status = "PASS" if ok and in_time else "FAIL"
    line = f"CRITERION {n:2d}: {status}  {detail}  [{elapsed:.3g} s, limit {limit:g} s]"
    RESULTS[n] = line
    print(line)
    return ok and in_time


def random_spectrum(rng, dims):
    return Spectrum(-np.sort(-rng.dirichlet(np.ones(dims[0] * dims[1]))), dims)


def test_criterion_01_demon():
    t0 = time.perf_counter()
    rep = demon_scenario(0.4, LAMBDA)
    elapsed = time.perf_counter() - t0
    (ea0, eb0), (ea1, eb1) = rep.energies_initial, rep.energies_final
    ok = (
        abs(rep.qmi_d - 0.397) <= 0.005
        and abs(rep.qmi_gamma - 0.307) <= 0.005
        and abs(ea0 - 0.2) <= 1e-10
        and abs(ea1 - 0.15) <= 1e-10
        and abs(eb0 - 0.4) <= 1e-10
        and abs(eb1 - 0.45) <= 1e-10
        and abs(ea0 + eb0 - 0.6) <= 1e-10
        and abs(ea1 + eb1 - 0.6) <= 1e-10
    )
    detail = f"I(rho_D)={rep.qmi_d:.6f} I(gamma_D)={rep.qmi_gamma:.6f} E_A {ea0:.12g}->{ea1:.12g} E_B {eb0:.12g}->{eb1:.12g}"
    assert report(1, ok, detail, elapsed, 1.0)


def test_criterion_02_hook_counts():
    shapes = [(2, 2), (2, 3), (3, 3), (4, 4)]
    t0 = time.perf_counter()
    counts = [hook_count(s) for s in shapes]
    elapsed = time.perf_counter() - t0
    ok = counts == [2, 5, 42, 24024] and all(isinstance(c, int) for c in counts)
    assert report(2, ok, f"counts={counts}", elapsed, 1e-3)


def test_criterion_03_catalog():
    enumerate_young.cache_clear()
    t0 = time.perf_counter()
    sets = {s: set(enumerate_young(s).patterns) for s in [(2, 3), (3, 3)]}
    elapsed = time.perf_counter() - t0
    ok = all(sets[s] == set(CATALOG[s]) for s in sets) and len(sets[(2, 3)]) == 5 and len(sets[(3, 3)]) == 21
    assert report(3, ok, f"|Y6|={len(sets[(2, 3)])} |Y9|={len(sets[(3, 3)])} set-equal to catalog", elapsed, 1.0)


def test_criterion_04_minimizers():
    t0 = time.perf_counter()
    a = minimal_table(Spectrum.from_weights((6, 5, 4, 3, 2, 1), (2, 3)))
    b = minimal_table(Spectrum.from_weights((10, 9, 8, 3, 2, 1), (2, 3)))
    elapsed = time.perf_counter() - t0
    ok = tuple(a.pattern.ravel()) == CATALOG[(2, 3)][2] and tuple(b.pattern.ravel()) == CATALOG[(2, 3)][0]
    assert report(4, ok, f"(6..1)/21 -> T6^({a.label}), (10,9,8,3,2,1)/33 -> T6^({b.label})", elapsed, 1.0)


def test_criterion_05_oracle():
    rng = np.random.default_rng([SEED, 5])
    shapes = [(2, 2), (2, 3), (3, 3)]
    t0 = time.perf_counter()
    worst = 0.0
    for k in range(200):
        spec = random_spectrum(rng, shapes[k % 3])
        worst = max(worst, abs(minimal_table(spec).value - exhaustive_extremum(spec).value))
    elapsed = time.perf_counter() - t0
    assert report(5, worst <= 1e-12, f"200 spectra, max |Young min - exhaustive min| = {worst:.3g}", elapsed, 300.0)


def test_criterion_06_two_qubit_closed_forms():
    rng = np.random.default_rng([SEED, 6])
    t0 = time.perf_counter()
    out_of_range = miss_max = miss_min = 0
    worst_max = worst_min = 0.0
    for _ in range(100):
        spec = random_spectrum(rng, (2, 2))
        lo, hi = two_qubit_min_qmi(spec), rho_max(spec).qmi_value
        vals = batch_qmi(orbit_samples(spec, 2000, rng), (2, 2), spec.entropy)
        out_of_range += int(vals.min() < lo - 1e-9 or vals.max() > hi + 1e-9)
        gap_max, gap_min = hi - vals.max(), vals.min() - lo
        worst_max, worst_min = max(worst_max, gap_max), max(worst_min, gap_min)
        miss_max += int(gap_max > 0.02)
        miss_min += int(gap_min > 0.02)
        assert abs((hi - lo) - delta_i(spec)) < 1e-12
    elapsed = time.perf_counter() - t0
    ok = out_of_range == 0 and miss_max == 0 and miss_min == 0
    detail = (
        f"out-of-range={out_of_range}/100, max-reach misses={miss_max}/100 (worst {worst_max:.4f}), "
        f"min-reach misses={miss_min}/100 (worst {worst_min:.4f})"
    )
    assert report(6, ok, detail, elapsed, 300.0)


def test_criterion_07_region():
    rng = np.random.default_rng([SEED, 7])
    t0 = time.perf_counter()
    total = 0
    for _ in range(5):
        spec = random_spectrum(rng, (2, 2))
        pts = batch_marginal_points(orbit_samples(spec, 10_000, rng))
        total += int(violations(spec, pts, tol=1e-8).sum())
    dist, n_inside = coverage_distance(LAMBDA, grid_n=100)
    elapsed = time.perf_counter() - t0
    ok = total == 0 and dist <= 0.01
    detail = f"violations={total} over 5x10^4 samples; coverage max distance {dist:.4f} over {n_inside} grid points"
    assert report(7, ok, detail, elapsed, 120.0)


def test_criterion_08_collisions():
    rng = np.random.default_rng([SEED, 8])
    t0 = time.perf_counter()
    sigma = diagonal_state(LAMBDA.values, (2, 2))
    schedule = rng.uniform(0.0, 1.0, 50)
    gaps = run_collisions(sigma, schedule).gaps()
    worst = float(np.abs(gaps[1:] - np.abs(2 * schedule - 1) * gaps[:-1]).max())
    s_a, s_b = run_collisions(sigma, [0.7] * 50).steps[-1].marginal_entropies
    q = qutrit_counterexample(Spectrum.from_weights((6, 5, 4, 3, 2, 1), (2, 3)))
    elapsed = time.perf_counter() - t0
    ok = worst <= 1e-12 and abs(s_a - s_b) <= 1e-6 and q.qmi_after > q.qmi_before
    detail = f"contraction residual {worst:.3g}; |S_A - S_B| = {abs(s_a - s_b):.3g}; qutrit I {q.qmi_before:.6f} -> {q.qmi_after:.6f}"
    assert report(8, ok, detail, elapsed, 10.0)


def test_criterion_09_histograms():
    t0 = time.perf_counter()
    h6 = histogram_minimizers((2, 3), 100_000, SEED)
    h9 = histogram_minimizers((3, 3), 100_000, SEED)
    elapsed = time.perf_counter() - t0
    c9 = np.sort(h9.counts)[::-1]
    ok = h6.modal_label() == 3 and h9.modal_label() == 19
    detail = (
        f"mode (2,3) = T6^({h6.modal_label()}) counts {h6.counts.tolist()}; "
        f"mode (3,3) = T9^({h9.modal_label()}) with {c9[0]} vs runner-up {c9[1]}, T9^(19) has {h9.counts[18]}"
    )
    assert report(9, ok, detail, elapsed, 600.0)


def test_criterion_10_graph():
    t0 = time.perf_counter()
    g = build_graph((2, 3))
    col = build_graph((2, 3), "col")
    elapsed = time.perf_counter() - t0
    chain = all(g.graph.has_edge(a, b) for a, b in [(1, 2), (2, 3), (3, 4)])
    ok = g.is_acyclic() and chain and not g.has_path(3, 5) and not g.has_path(5, 3) and col.edges == g.reversed().edges
    assert report(10, ok, f"edges={g.edges}; column graph = reversed row graph", elapsed, 1.0)


def test_criterion_11_see_saw_and_lemmas():
    rng = np.random.default_rng([SEED, 11])
    t0 = time.perf_counter()
    checked = failed = 0
    for shape in [(2, 3), (3, 3)]:
        ys = enumerate_young(shape)
        edges = build_graph(shape).edges
        for _ in range(100):
            spec = random_spectrum(rng, shape)
            for i, j in edges:
                checked += 1
                failed += not see_saw_check(ys.pattern(i), ys.pattern(j), spec).holds
    lemma_fail = 0
    shapes = [(2, 3), (3, 3), (2, 4), (3, 4)]
    for variant in (1, 2):
        for k in range(10_000):
            shape = shapes[k % len(shapes)]
            support = shape[1] + (variant - 1)
            w = np.zeros(shape[0] * shape[1])
            w[:support] = rng.dirichlet(np.ones(support))
            lemma_fail += not lemma_supports(Spectrum(w, shape), variant=variant).holds
    elapsed = time.perf_counter() - t0
    ok = failed == 0 and lemma_fail == 0
    detail = f"see-saw failures {failed}/{checked} pairs; lemma failures {lemma_fail}/20000"
    assert report(11, ok, detail, elapsed, 120.0)


def test_criterion_12_heat_flow():
    rng = np.random.default_rng([SEED, 12])
    t0 = time.perf_counter()
    bad = 0
    margin = np.inf
    for rho, u in sample_heat_flow_pairs(10_000, rng):
        rep = heat_flow_check(rho, u, slack=1e-9)
        bad += not rep.holds
        margin = min(margin, rep.lhs - rep.delta_i_nats)
    elapsed = time.perf_counter() - t0
    assert report(12, bad == 0, f"violations {bad}/10000; smallest margin {margin:.3g} nats", elapsed, 120.0)


if __name__ == "__main__":
    import sys

    for name, fn in sorted(globals().items()):
        if name.startswith("test_criterion_"):
            try:
                fn()
            except AssertionError:
                pass
    sys.exit(0 if all("PASS" in line for line in RESULTS.values()) else 1)
