import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import weights
from orbitqmi.collision import dephase
from orbitqmi.errors import DimensionError, DomainError, PreconditionError
from orbitqmi.majorization import (
    build_graph,
    in_convex_hull,
    lemma_supports,
    majorizes,
    see_saw_check,
    to_csv,
    to_dot,
    valid_swaps,
)
from orbitqmi.orbit_dynamics import evolve, haar_unitary
from orbitqmi.spectra import Spectrum
from orbitqmi.states import diagonal_state
from orbitqmi.tableaux import Table, enumerate_young, marginals

SPEC_21 = Spectrum.from_weights((6, 5, 4, 3, 2, 1), (2, 3))


class TestMajorizes:
    @given(weights(4))
    def test_pure_and_uniform(self, p):
        assert majorizes((1, 0, 0, 0), p)
        assert majorizes(p, (0.25,) * 4)

    def test_incomparable(self):
        p, q = (0.5, 0.3, 0.2), (0.45, 0.4, 0.15)
        assert not majorizes(p, q) and not majorizes(q, p)

    def test_length_mismatch(self):
        with pytest.raises(DimensionError):
            majorizes((1, 0), (1, 0, 0))

    @given(weights(5), st.integers(0, 2**32 - 1))
    def test_doubly_stochastic_image(self, p, seed):
        # a unistochastic matrix maps p to something it majorizes
        u = haar_unitary(5, seed)
        assert majorizes(p, np.abs(u) ** 2 @ p)


class TestConvexHull:
    @pytest.mark.parametrize("seed", range(100))
    def test_dephased_orbit_state(self, seed):
        rng = np.random.default_rng(seed)
        spec = Spectrum(-np.sort(-rng.dirichlet(np.ones(4))), (2, 2))
        sigma = dephase(evolve(diagonal_state(spec.values, (2, 2)), haar_unitary(4, rng)))
        assert in_convex_hull(sigma.spectrum(), spec)

    def test_same_spectrum(self, lam):
        assert in_convex_hull(lam, lam)

    def test_pure_not_in_mixed_hull(self, lam):
        assert not in_convex_hull(Spectrum((1, 0, 0, 0), (2, 2)), lam)


class TestValidSwaps:
    def test_two_qubit_none(self):
        assert valid_swaps([[1, 2], [3, 4]]) == []

    def test_t6_1_reaches_t6_2(self):
        targets = {s.target_label for s in valid_swaps(enumerate_young((2, 3)).pattern(1))}
        assert 2 in targets

    @pytest.mark.parametrize("shape", [(2, 3), (3, 3)])
    def test_results_are_members(self, shape):
        ys = enumerate_young(shape)
        for p in ys.arrays():
            for sw in valid_swaps(p):
                assert sw.r > sw.t and sw.s < sw.u
                q = p.copy()
                q[sw.r, sw.s], q[sw.t, sw.u] = p[sw.t, sw.u], p[sw.r, sw.s]
                assert ys.label(q) == sw.target_label

    def test_not_young(self):
        with pytest.raises(PreconditionError):
            valid_swaps([[2, 1], [3, 4]])


class TestSeeSaw:
    def test_reference_pair(self):
        ys = enumerate_young((2, 3))
        rep = see_saw_check(ys.pattern(1), ys.pattern(2), SPEC_21)
        assert rep.holds and not rep.degenerate

    def test_degenerate(self):
        spec = Spectrum.from_weights((6, 5, 4, 4, 2, 1), (2, 3))
        ys = enumerate_young((2, 3))
        rep = see_saw_check(ys.pattern(1), ys.pattern(2), spec)
        assert rep.degenerate and rep.holds

    @pytest.mark.parametrize("shape", [(2, 3), (3, 3)])
    @given(seed=st.integers(0, 2**32 - 1))
    def test_all_pairs(self, shape, seed):
        rng = np.random.default_rng(seed)
        spec = Spectrum(-np.sort(-rng.dirichlet(np.ones(shape[0] * shape[1]))), shape)
        ys = enumerate_young(shape)
        for i, j in build_graph(shape).edges:
            assert see_saw_check(ys.pattern(i), ys.pattern(j), spec).holds

    def test_not_adjacent(self):
        ys = enumerate_young((2, 3))
        with pytest.raises(PreconditionError):
            see_saw_check(ys.pattern(1), ys.pattern(4), SPEC_21)


class TestGraph:
    def test_y6_structure(self):
        g = build_graph((2, 3))
        assert g.is_acyclic()
        assert all(g.graph.has_edge(a, b) for a, b in [(1, 2), (2, 3), (3, 4)])
        assert not g.has_path(3, 5) and not g.has_path(5, 3)

    def test_y9_acyclic(self):
        assert build_graph((3, 3)).is_acyclic()

    def test_two_qubit(self):
        g = build_graph((2, 2))
        assert g.nodes == [1] and g.edges == []

    @pytest.mark.parametrize("shape", [(2, 3), (3, 3), (2, 4)])
    def test_column_graph_is_reverse(self, shape):
        assert build_graph(shape, "col").edges == build_graph(shape).reversed().edges

    @pytest.mark.parametrize("shape", [(2, 3), (3, 3)])
    @given(seed=st.integers(0, 2**32 - 1))
    def test_closure_respects_majorization(self, shape, seed):
        rng = np.random.default_rng(seed)
        spec = Spectrum(-np.sort(-rng.dirichlet(np.ones(shape[0] * shape[1]))), shape)
        ys = enumerate_young(shape)
        rows = {k: marginals(Table.from_pattern(spec, ys.pattern(k)))[0] for k in range(1, len(ys) + 1)}
        for i, j in build_graph(shape).closure():
            assert majorizes(rows[i], rows[j])

    def test_kind(self):
        with pytest.raises(DomainError):
            build_graph((2, 3), "diag")

    def test_exports(self):
        g = build_graph((2, 3))
        dot = to_dot(g)
        assert dot.startswith("// schema_version: 1\n")
        assert '1 [label="T_6^(1)"];' in dot and "1 -> 2;" in dot
        lines = to_csv(g).splitlines()
        assert lines[:2] == ["# schema_version: 1", "source,target"]
        assert len(lines) == 2 + len(g.edges)


class TestLemmas:
    def test_variant_1_product(self):
        rep = lemma_supports(Spectrum((0.5, 0.3, 0.2, 0, 0, 0), (2, 3)), variant=1)
        assert rep.k == 3
        assert rep.qmi_1 == pytest.approx(0.0, abs=1e-12)
        assert rep.holds

    def test_variant_2(self):
        assert lemma_supports(Spectrum((0.4, 0.3, 0.2, 0.1, 0, 0), (2, 3)), variant=2).holds

    @pytest.mark.parametrize("variant", [1, 2])
    def test_point_mass(self, variant):
        rep = lemma_supports(Spectrum((1, 0, 0, 0, 0, 0), (2, 3)), variant=variant)
        assert rep.qmi_1 == pytest.approx(0.0, abs=1e-12) and rep.qmi_2 == pytest.approx(0.0, abs=1e-12)

    def test_support_too_large(self):
        with pytest.raises(PreconditionError):
            lemma_supports(Spectrum((0.4, 0.3, 0.2, 0.1, 0, 0), (2, 3)), variant=1)

    @pytest.mark.parametrize("variant", [1, 2])
    @pytest.mark.parametrize("shape", [(2, 3), (3, 3), (2, 4)])
    @given(seed=st.integers(0, 2**32 - 1))
    def test_random_support(self, variant, shape, seed):
        k = shape[1]
        support = k if variant == 1 else k + 1
        w = np.zeros(shape[0] * shape[1])
        w[:support] = np.random.default_rng(seed).dirichlet(np.ones(support))
        assert lemma_supports(Spectrum(w, shape), variant=variant).holds
