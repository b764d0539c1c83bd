import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import LAMBDA, spectra
from orbitqmi.errors import BudgetExceeded, DimensionError, DomainError
from orbitqmi.majorization import majorizes
from orbitqmi.spectra import Spectrum, shannon_entropy
from orbitqmi.tableaux import (
    CATALOG,
    MAX_CLASSICAL_2x3,
    Table,
    all_permutations,
    enumerate_young,
    exhaustive_extremum,
    histogram_minimizers,
    hook_count,
    is_young,
    is_young_pattern,
    marginals,
    max_classical_table,
    minimal_table,
    parse_shape,
    same_symmetry_class,
    sort_table,
    symmetry_classes,
    table_mi,
)

SPEC_21 = Spectrum.from_weights((6, 5, 4, 3, 2, 1), (2, 3))
SPEC_33 = Spectrum.from_weights((10, 9, 8, 3, 2, 1), (2, 3))


def entropy_sum(t):
    a, b = marginals(t)
    return shannon_entropy(a) + shannon_entropy(b)


@pytest.mark.parametrize("text, expected", [("2x3", (2, 3)), ((3, 3), (3, 3)), ("4X4", (4, 4))])
def test_parse_shape(text, expected):
    assert parse_shape(text) == expected


@pytest.mark.parametrize("bad", ["2by3", (0, 3), "2x3x4"])
def test_parse_shape_rejects(bad):
    with pytest.raises(DomainError):
        parse_shape(bad)


class TestMarginals:
    def test_sorted_two_qubit(self):
        a, b = marginals(Table(np.reshape(LAMBDA, (2, 2))))
        np.testing.assert_allclose(a, (0.9, 0.1))
        np.testing.assert_allclose(b, (0.7, 0.3))

    def test_uniform(self):
        a, b = marginals(Table(np.full((2, 3), 1 / 6)))
        np.testing.assert_allclose(a, 0.5)
        np.testing.assert_allclose(b, 1 / 3)

    def test_2x3(self):
        a, b = marginals(Table.from_pattern(SPEC_21, [[1, 2, 3], [4, 5, 6]]))
        np.testing.assert_allclose(a * 21, (15, 6))
        np.testing.assert_allclose(b * 21, (9, 7, 5))


class TestTableMI:
    @given(st.lists(st.floats(0.01, 1), min_size=2, max_size=2), st.lists(st.floats(0.01, 1), min_size=3, max_size=3))
    def test_product_zero(self, pa, pb):
        t = np.outer(pa, pb)
        assert table_mi(Table(t / t.sum())) == pytest.approx(0.0, abs=1e-12)

    def test_sorted(self):
        assert table_mi(Table(np.reshape(LAMBDA, (2, 2)))) == pytest.approx(0.05483, abs=1e-5)

    def test_t4_2(self, lam):
        t = Table.from_pattern(lam, [[3, 2], [1, 4]])
        assert table_mi(t) == pytest.approx(0.55678, abs=1e-5)

    def test_rejects_bad_tables(self):
        with pytest.raises(DomainError):
            Table([[0.5, 0.6], [0.0, -0.1]])
        with pytest.raises(DomainError):
            Table([[0.5, 0.4]])
        with pytest.raises(DimensionError):
            Table([0.5, 0.5])


class TestSortTable:
    def test_young_fixed(self):
        t = Table.from_pattern(SPEC_21, [[1, 2, 5], [3, 4, 6]])
        np.testing.assert_array_equal(sort_table(t).entries, t.entries)

    def test_hand_example(self):
        # column sort leaves this table alone, the row sort then finishes it
        t = sort_table(Table([[0.1, 0.6], [0.0, 0.3]]))
        np.testing.assert_allclose(t.entries, [[0.6, 0.1], [0.3, 0.0]])
        np.testing.assert_allclose(t.entries.T, [[0.6, 0.3], [0.1, 0.0]])

    @given(st.integers(0, 2**32 - 1), st.sampled_from([(2, 2), (2, 3), (3, 3), (3, 4)]))
    def test_properties(self, seed, shape):
        rng = np.random.default_rng(seed)
        t = Table(rng.dirichlet(np.ones(shape[0] * shape[1])).reshape(shape))
        s = sort_table(t)
        assert is_young(s)
        assert s.matches(Spectrum(t.values(), shape))
        assert entropy_sum(s) <= entropy_sum(t) + 1e-12
        a0, b0 = marginals(t)
        a1, b1 = marginals(s)
        assert majorizes(a1, a0) and majorizes(b1, b0)


class TestYoung:
    @pytest.mark.parametrize("shape, n", [((2, 2), 2), ((2, 3), 5), ((3, 3), 42), ((4, 4), 24024), ((1, 5), 1)])
    def test_hook_count(self, shape, n):
        assert hook_count(shape) == n

    @pytest.mark.parametrize("shape", [(2, 2), (2, 3), (3, 2), (2, 4), (3, 3), (3, 4)])
    def test_count_matches_hook(self, shape):
        ys = enumerate_young(shape)
        expected = hook_count(shape) // (2 if shape[0] == shape[1] else 1)
        assert len(ys) == expected
        assert all(is_young_pattern(p) for p in ys.arrays())

    @pytest.mark.parametrize("shape", [(2, 3), (3, 3)])
    def test_catalog(self, shape):
        ys = enumerate_young(shape)
        assert set(ys.patterns) == set(CATALOG[shape])
        assert ys.catalog_order
        assert ys.label(ys.pattern(3)) == 3

    def test_two_qubit_single(self):
        ys = enumerate_young((2, 2))
        assert ys.patterns == ((1, 2, 3, 4),)

    def test_budget(self):
        with pytest.raises(BudgetExceeded):
            enumerate_young((4, 5))
        with pytest.raises(BudgetExceeded):
            all_permutations(10)

    def test_unknown_label(self):
        with pytest.raises(DomainError):
            enumerate_young((2, 3)).label([[1, 3, 2], [4, 5, 6]])


class TestMinimalTable:
    @pytest.mark.parametrize("spec, label", [(SPEC_21, 3), (SPEC_33, 1)])
    def test_spot_checks(self, spec, label):
        best = minimal_table(spec)
        assert best.label == label
        np.testing.assert_array_equal(best.pattern.ravel(), CATALOG[(2, 3)][label - 1])

    @given(spectra((2, 2)))
    def test_two_qubit_sorted(self, spec):
        best = minimal_table(spec)
        np.testing.assert_array_equal(best.table.entries, spec.values.reshape(2, 2))

    @given(spectra((2, 3)))
    def test_oracle_2x3(self, spec):
        assert minimal_table(spec).value == pytest.approx(exhaustive_extremum(spec).value, abs=1e-12)

    @pytest.mark.parametrize("seed", range(5))
    def test_oracle_3x3(self, seed):
        spec = Spectrum(-np.sort(-np.random.default_rng(seed).dirichlet(np.ones(9))), (3, 3))
        assert minimal_table(spec).value == pytest.approx(exhaustive_extremum(spec).value, abs=1e-12)

    def test_ties_prefer_lexicographic(self):
        best = minimal_table(Spectrum(np.full(6, 1 / 6), (2, 3)))
        assert best.label == 1 and len(best.ties) == 4

    def test_large_shape_flagged(self):
        spec = Spectrum(-np.sort(-np.random.default_rng(0).dirichlet(np.ones(12))), (3, 4))
        assert minimal_table(spec).young_restricted

    def test_unpacks(self):
        table, value = minimal_table(SPEC_21)
        assert value == pytest.approx(table_mi(table))

    @given(spectra((2, 2)))
    def test_two_qubit_ranking(self, spec):
        t_sorted = table_mi(Table.from_pattern(spec, [[1, 2], [3, 4]]))
        t1 = table_mi(Table.from_pattern(spec, [[1, 3], [4, 2]]))
        t2 = table_mi(Table.from_pattern(spec, [[3, 2], [1, 4]]))
        assert t2 >= t1 - 1e-12 >= t_sorted - 2e-12


class TestMaxClassical:
    def test_2x3_class(self):
        best = max_classical_table(SPEC_21)
        assert same_symmetry_class(best.pattern, MAX_CLASSICAL_2x3, (2, 3))
        assert best.value == pytest.approx(table_mi(Table.from_pattern(SPEC_21, MAX_CLASSICAL_2x3)), abs=1e-12)

    def test_two_qubit(self, lam):
        best = max_classical_table(lam)
        assert same_symmetry_class(best.pattern, [[3, 2], [1, 4]], (2, 2))
        assert best.value == pytest.approx(0.55678, abs=1e-5)

    def test_uniform(self):
        assert max_classical_table(Spectrum(np.full(6, 1 / 6), (2, 3))).value == pytest.approx(0.0, abs=1e-12)

    def test_kind(self, lam):
        with pytest.raises(DomainError):
            exhaustive_extremum(lam, kind="median")


class TestSymmetry:
    @pytest.mark.parametrize("shape, n", [((2, 2), 3), ((2, 3), 60)])
    def test_counts(self, shape, n):
        assert symmetry_classes(shape).count == n

    def test_orbit_sizes(self):
        sc = symmetry_classes((2, 3))
        assert (np.bincount(sc.labels) == 12).all()

    @pytest.mark.parametrize("seed", range(3))
    @pytest.mark.parametrize("shape", [(2, 2), (2, 3)])
    def test_mi_constant_on_class(self, seed, shape):
        sc = symmetry_classes(shape)
        spec = Spectrum(-np.sort(-np.random.default_rng(seed).dirichlet(np.ones(shape[0] * shape[1]))), shape)
        for k in range(sc.count):
            vals = [table_mi(Table.from_pattern(spec, m)) for m in sc.members(k)]
            assert max(vals) - min(vals) < 1e-9


class TestHistogram:
    def test_counts_sum(self):
        h = histogram_minimizers((2, 3), 2500, 11, chunk=1000)
        assert h.counts.sum() == 2500 and len(h.counts) == 5

    def test_thread_independent(self):
        a = histogram_minimizers("2x3", 3000, 7, threads=1, chunk=1000)
        b = histogram_minimizers("2x3", 3000, 7, threads=3, chunk=1000)
        np.testing.assert_array_equal(a.counts, b.counts)
        assert a.ties == b.ties

    def test_matches_minimal_table(self):
        rng = np.random.default_rng([5, 0])
        lam = rng.dirichlet(np.ones(6), size=50)
        h = histogram_minimizers((2, 3), 50, 5)
        labels = [minimal_table(Spectrum(-np.sort(-x), (2, 3))).label for x in lam]
        np.testing.assert_array_equal(h.counts, np.bincount(labels, minlength=6)[1:])

    def test_env_threads(self, monkeypatch):
        monkeypatch.setenv("ORBIT_THREADS", "2")
        a = histogram_minimizers((2, 2), 100, 1)
        assert a.counts.tolist() == [100]
