import collections
import math
from fractions import Fraction

import pytest

import testhelpers
from repobee_sepchoose import _exceptions, _generators, _graph, _rng, _stable

K2 = _graph.build_graph(2, [(0, 1)])
K3 = _generators.complete_graph(3)


class TestEnumeration:
    def test_c5_has_eleven_stable_sets(self, c5):
        family = _stable.enumerate_stable_sets(c5)

        assert family.count == 11
        assert family.all_sets[:3] == ((), (0,), (0, 2))

    @pytest.mark.parametrize("seed", range(5))
    def test_matches_brute_force(self, seed):
        g = _generators.gnp(9, Fraction(1, 3), seed)

        family = _stable.enumerate_stable_sets(g)

        assert list(family.all_sets) == testhelpers.brute_stable_sets(g)

    def test_budget(self):
        with pytest.raises(_exceptions.BudgetExceededError):
            _stable.enumerate_stable_sets(_graph.build_graph(5, []), 10)

    def test_maximal_stable_sets_of_c5(self, c5):
        assert _stable.maximal_stable_sets(c5) == [
            (0, 2),
            (0, 3),
            (1, 3),
            (1, 4),
            (2, 4),
        ]

    @pytest.mark.parametrize("seed", range(5))
    def test_maximal_sets_are_maximal(self, seed):
        g = _generators.gnp(9, Fraction(1, 3), seed)
        stable = testhelpers.brute_stable_sets(g)
        maximal = [
            s
            for s in stable
            if not any(set(s) < set(t) for t in stable)
        ]

        assert _stable.maximal_stable_sets(g) == sorted(maximal)

    def test_uniform_stable_set_is_seeded(self, c5):
        first = _stable.uniform_stable_set(c5, 11)
        second = _stable.uniform_stable_set(c5, 11)

        assert first == second
        assert c5.is_stable(first)


class TestUniformStableSet:
    """Frequencies over many derived seeds. The seeds are fixed, so these
    are deterministic checks.
    """

    # chi-square with 10 degrees of freedom at p = 0.001
    CHI2_LIMIT = 29.59

    @staticmethod
    def _draw(g, draws):
        return collections.Counter(
            _stable.uniform_stable_set(g, _rng.derive_seed(17, i))
            for i in range(draws)
        )

    def test_single_vertex_is_a_fair_coin(self):
        g = _graph.build_graph(1, [])

        counts = self._draw(g, 2000)

        assert set(counts) == {(), (0,)}
        assert abs(counts[()] / 2000 - 0.5) < 0.05

    def test_every_stable_set_of_c5_is_equally_likely(self, c5):
        draws = 5500
        expected = draws / 11

        counts = self._draw(c5, draws)

        assert sorted(counts) == testhelpers.brute_stable_sets(c5)
        chi2 = sum((counts[s] - expected) ** 2 / expected for s in counts)
        assert chi2 < self.CHI2_LIMIT


class TestExpectations:
    def test_expected_degree_sum_of_c5(self, c5):
        assert _stable.expected_degree_sum(c5) == Fraction(30, 11)

    def test_expected_degree_sum_of_k2(self):
        assert _stable.expected_degree_sum(K2) == Fraction(2, 3)

    def test_marginals_of_k2(self):
        assert _stable.marginals_of_uniform(K2) == [
            (Fraction(1, 3), Fraction(1, 3)),
            (Fraction(1, 3), Fraction(1, 3)),
        ]

    def test_x_statistic(self, c5):
        assert _stable.x_statistic(c5, 0, (0, 2)) == 2
        assert _stable.x_statistic(c5, 0, (1, 3)) == 1

    def test_x_statistic_rejects_non_stable_set(self, c5):
        with pytest.raises(_exceptions.NotStableError):
            _stable.x_statistic(c5, 0, (0, 1))

    @pytest.mark.parametrize("seed", range(5))
    def test_x_statistics_sum_to_twice_degree_sum(self, seed):
        g = _generators.gnp(9, Fraction(1, 3), seed)
        family = _stable.enumerate_stable_sets(g)

        total = sum(_stable.expected_x_statistics(g, family))

        assert total == 2 * _stable.expected_degree_sum(g, family)

    @pytest.mark.parametrize(
        "g",
        [
            _generators.cycle(5),
            _generators.named_fixture("petersen"),
            _generators.complete_bipartite(3, 2),
        ],
        ids=["c5", "petersen", "k32"],
    )
    def test_expected_degree_sum_lower_bound(self, g):
        """E(sum of d(v) over S) >= 1/4 sum of ln d(v)."""
        upper_log_sum = sum(_stable.ln_bounds(d)[1] for d in g.degrees())

        assert _stable.expected_degree_sum(g) >= upper_log_sum / 4


class TestConditionalCounts:
    def test_conditional_expectation(self):
        assert _stable.conditional_expectation(4, 2) == Fraction(8, 5)
        assert _stable.conditional_expectation(1, 0) == Fraction(1, 2)

    @pytest.mark.parametrize("d, k", [(0, 0), (3, 4), (3, -1)])
    def test_conditional_expectation_rejects(self, d, k):
        with pytest.raises(_exceptions.ParameterError):
            _stable.conditional_expectation(d, k)

    @pytest.mark.parametrize(
        "g",
        [
            _generators.cycle(5),
            _generators.cycle(6),
            _generators.named_fixture("petersen"),
            _generators.named_fixture("grotzsch"),
        ],
        ids=["c5", "c6", "petersen", "grotzsch"],
    )
    def test_identity_holds_without_triangles(self, g):
        assert _stable.conditional_count_mismatches(g) == []

    def test_identity_fails_on_triangle(self):
        mismatches = _stable.conditional_count_mismatches(K3)

        assert (0, (), 4, 5) in mismatches


class TestLogBounds:
    @pytest.mark.parametrize("x", [2, 3, 10, 9973, Fraction(7, 2)])
    def test_encloses_ln(self, x):
        lo, hi = _stable.ln_bounds(x)

        assert lo <= math.log(x) <= hi
        assert hi - lo <= Fraction(3, 10 ** 9)

    def test_ln_one_is_exact(self):
        assert _stable.ln_bounds(1) == (0, 0)

    def test_rejects_nonpositive(self):
        with pytest.raises(_exceptions.ParameterError):
            _stable.ln_bounds(0)


class TestAppendix:
    def test_inequality_holds_for_small_d(self):
        report = _stable.verify_appendix_inequality(100, 60)

        assert report.violations == []
        assert report.checked == 4330
        assert report.min_slack > 0

    def test_minimum_of_auxiliary_function(self):
        minimum = _stable.appendix_minimum()

        assert 9 <= minimum.x <= 10.5
        assert 0.25 <= minimum.value <= 0.35


class TestMaxStableSet:
    def test_petersen(self, petersen):
        assert _stable.max_stable_set(petersen) == (0, 2, 8, 9)

    @pytest.mark.parametrize("seed", range(5))
    def test_matches_brute_force(self, seed):
        g = _generators.gnp(10, Fraction(2, 5), seed)

        best = _stable.max_stable_set(g)

        assert g.is_stable(best)
        assert len(best) == testhelpers.brute_independence_number(g)
        assert best == min(
            s
            for s in testhelpers.brute_stable_sets(g)
            if len(s) == len(best)
        )

    def test_budget(self, petersen):
        with pytest.raises(_exceptions.BudgetExceededError):
            _stable.max_stable_set(petersen, budget=3)
