from fractions import Fraction

import pytest

import testhelpers
from repobee_sepchoose import (
    _coloring,
    _exceptions,
    _extract,
    _generators,
    _graph,
    _stable,
)

K2 = _graph.build_graph(2, [(0, 1)])
K33 = _generators.complete_bipartite(3, 3)
K4 = _generators.complete_graph(4)


def _flattened(g):
    f = _coloring.fractional_chromatic_exact(g)
    return f, _coloring.fractional_to_distribution(f)


class TestWitnesses:
    def test_fields_are_recomputed(self, c5):
        witness = _extract.bipartite_witness(c5, [2, 0], [3, 1])

        assert witness == _extract.BipartiteWitness(
            part1=(0, 2),
            part2=(1, 3),
            edge_count=3,
            avg_degree=Fraction(3, 2),
            min_degree=1,
        )
        assert witness.size == 4
        assert witness.verify(c5)

    def test_tampered_witness_fails_verification(self, c5):
        witness = _extract.bipartite_witness(c5, [0, 2], [1, 3])
        tampered = _extract.BipartiteWitness(
            part1=witness.part1,
            part2=witness.part2,
            edge_count=4,
            avg_degree=Fraction(2),
            min_degree=1,
        )

        assert not tampered.verify(c5)

    def test_rejects_non_stable_part(self, c5):
        with pytest.raises(_exceptions.NotStableError):
            _extract.bipartite_witness(c5, [0, 1], [3])

    def test_rejects_overlapping_parts(self, c5):
        with pytest.raises(_exceptions.InvalidVertexSetError):
            _extract.semi_bipartite_witness(c5, [0, 2], [2, 3])

    def test_semi_witness_ignores_edges_inside_other_part(self, c5):
        witness = _extract.semi_bipartite_witness(c5, [0], [1, 2, 3, 4])

        assert witness.cross_edge_count == 2
        assert witness.avg_degree == Fraction(4, 5)
        assert witness.min_degree == 0


class TestExtractFromDistribution:
    def test_c5(self, c5):
        f, dist = _flattened(c5)

        witness = _extract.extract_from_distribution(c5, dist)

        assert f.value == Fraction(5, 2)
        assert witness.part1 == (0, 2)
        assert witness.part2 == (1, 3)
        assert witness.avg_degree == Fraction(3, 2)

    def test_complete_bipartite(self):
        _, dist = _flattened(K33)

        witness = _extract.extract_from_distribution(K33, dist)

        assert (witness.part1, witness.part2) == ((0, 1, 2), (3, 4, 5))
        assert witness.avg_degree == 3

    def test_single_edge(self):
        _, dist = _flattened(K2)

        witness = _extract.extract_from_distribution(K2, dist)

        assert witness.edge_count == 1
        assert witness.avg_degree == 1

    @pytest.mark.parametrize("seed", range(8))
    def test_guarantee(self, seed):
        g = _generators.gnp(8, Fraction(1, 2), seed)
        f, dist = _flattened(g)

        witness = _extract.extract_from_distribution(g, dist)

        assert witness.verify(g)
        assert witness.avg_degree >= g.avg_degree() / f.value

    def test_rejects_unequal_marginals(self, c5):
        dist = _coloring.make_distribution(
            5, [((0, 2), Fraction(1, 2)), ((1, 3), Fraction(1, 2))]
        )

        with pytest.raises(_exceptions.PreconditionError):
            _extract.extract_from_distribution(c5, dist)

    def test_pair_budget(self, c5):
        _, dist = _flattened(c5)

        with pytest.raises(_exceptions.BudgetExceededError):
            _extract.extract_from_distribution(c5, dist, pair_budget=1)


class TestExtractFromColoring:
    def test_c5(self, c5):
        _, coloring = _coloring.chromatic_number_exact(c5)

        witness = _extract.extract_from_coloring(c5, coloring)

        assert witness.verify(c5)
        assert witness.min_degree >= 1

    @pytest.mark.parametrize("seed", range(8))
    def test_guarantee(self, seed):
        g = _generators.gnp(9, Fraction(1, 2), seed)
        chi, coloring = _coloring.chromatic_number_exact(g)

        witness = _extract.extract_from_coloring(g, coloring)

        assert witness.verify(g)
        assert witness.min_degree >= Fraction(g.min_degree(), 2 * chi)

    def test_single_class(self):
        g = _graph.build_graph(3, [])
        coloring = _coloring.ProperColoring(colors=(0, 0, 0), k=1)

        witness = _extract.extract_from_coloring(g, coloring)

        assert witness.size == 0


class TestPeeling:
    def test_petersen(self, petersen):
        cover = _extract.aks_peeling_coloring(petersen, 2)

        assert cover.classes == [(0, 2, 8, 9), (1, 3, 5), (4, 6, 7)]
        assert cover.leftover == ()
        assert cover.min_class_size == 3
        assert cover.class_count_bound == Fraction(10, 3)

    def test_c6_splits_into_two_sides(self):
        cover = _extract.aks_peeling_coloring(_generators.cycle(6), 0)

        assert cover.classes == [(0, 2, 4), (1, 3, 5)]

    def test_threshold_at_least_n_peels_nothing(self, c5):
        cover = _extract.aks_peeling_coloring(c5, 5)

        assert cover.classes == []
        assert cover.leftover == (0, 1, 2, 3, 4)

    def test_classes_are_stable(self):
        g = _generators.gnp(14, Fraction(1, 3), 5)

        cover = _extract.aks_peeling_coloring(g, 3)

        assert all(g.is_stable(cls) for cls in cover.classes)
        assert len(cover.leftover) <= 3

    def test_extract_from_cover(self, petersen):
        cover = _extract.aks_peeling_coloring(petersen, 2)

        witness = _extract.extract_from_cover(petersen, cover)

        assert witness.verify(petersen)
        assert witness.min_degree >= Fraction(3, 2 * 3)


class TestSemiBipartite:
    def test_c5_exact(self, c5):
        witness = _extract.best_semi_bipartite(c5)

        assert witness.stable_part == (0, 2)
        assert witness.other_part == (1, 3, 4)
        assert witness.cross_edge_count == 4
        assert witness.avg_degree == Fraction(8, 5)

    def test_complete_bipartite_exact(self):
        witness = _extract.best_semi_bipartite(K33)

        assert witness.stable_part == (0, 1, 2)
        assert witness.avg_degree == 3

    def test_beats_bipartite_on_k4(self):
        semi = _extract.best_semi_bipartite(K4)
        oracle = _extract.max_bip_induced_oracle(K4)

        assert semi.avg_degree == Fraction(3, 2)
        assert oracle.avg_degree == 1

    @pytest.mark.parametrize("seed", range(6))
    def test_exact_guarantee(self, seed):
        g = _generators.gnp(10, Fraction(1, 2), seed)
        if g.min_degree() < 1:
            pytest.skip("isolated vertex")

        witness = _extract.best_semi_bipartite(g)

        assert witness.verify(g)
        assert witness.avg_degree >= _stable.ln_bounds(g.min_degree())[1] / 2

    @pytest.mark.parametrize(
        "mode", [_extract.SemiMode.SAMPLED, _extract.SemiMode.LOCAL_SEARCH]
    )
    def test_heuristics_are_lower_bounds(self, mode):
        g = _generators.gnp(10, Fraction(2, 5), 3)
        exact = _extract.best_semi_bipartite(g)

        witness = _extract.best_semi_bipartite(
            g, mode, seed=1, samples=50, steps=200
        )

        assert witness.verify(g)
        assert witness.avg_degree <= exact.avg_degree

    def test_heuristics_are_seeded(self):
        g = _generators.gnp(12, Fraction(2, 5), 3)

        first = _extract.best_semi_bipartite(
            g, _extract.SemiMode.LOCAL_SEARCH, seed=9, steps=100
        )
        second = _extract.best_semi_bipartite(
            g, _extract.SemiMode.LOCAL_SEARCH, seed=9, steps=100
        )

        assert first == second

    def test_sampled_falls_back_over_budget(self, c5):
        witness = _extract.best_semi_bipartite(
            c5, _extract.SemiMode.SAMPLED, seed=0, samples=20, budget=5
        )

        assert witness.verify(c5)
        assert c5.is_stable(witness.stable_part)

    def test_exact_budget(self, c5):
        with pytest.raises(_exceptions.BudgetExceededError):
            _extract.best_semi_bipartite(c5, budget=5)


class TestTrimEqualParts:
    def test_equal_sizes_keep_a(self, c5):
        result = _extract.trim_equal_parts(c5, [0, 2], [1, 3])

        assert result.a_trimmed == (0, 2)
        assert result.certified

    def test_keeps_highest_degrees(self):
        a, b = [0, 1, 2, 3], [4, 5, 6]
        g = _graph.build_graph(
            7, [(0, 4), (0, 5), (0, 6), (1, 4), (1, 5), (2, 4)]
        )

        result = _extract.trim_equal_parts(g, a, b)

        assert result.a_trimmed == (0, 1, 2)
        assert result.before == Fraction(12, 7)
        assert result.after == 2
        assert result.certified

    def test_ties_go_to_lowest_id(self):
        g = _generators.complete_bipartite(4, 2)

        result = _extract.trim_equal_parts(g, [0, 1, 2, 3], [4, 5])

        assert result.a_trimmed == (0, 1)

    @pytest.mark.parametrize("seed", range(10))
    def test_halving_bound_on_random_bipartite(self, seed):
        g = _generators.gnp(14, Fraction(1, 2), seed)
        a, b = range(8), range(8, 14)

        assert _extract.trim_equal_parts(g, a, b).certified

    def test_rejects_small_a(self, c5):
        with pytest.raises(_exceptions.PreconditionError):
            _extract.trim_equal_parts(c5, [0], [1, 3])


class TestOracle:
    @pytest.mark.parametrize(
        "g, expected",
        [
            (_generators.cycle(5), Fraction(3, 2)),
            (K33, Fraction(3)),
            (K4, Fraction(1)),
            (_graph.build_graph(3, []), Fraction(0)),
        ],
        ids=["c5", "k33", "k4", "edgeless"],
    )
    def test_known_values(self, g, expected):
        assert _extract.max_bip_induced_oracle(g).avg_degree == expected

    def test_c5_witness_is_lexicographically_first(self, c5):
        witness = _extract.max_bip_induced_oracle(c5)

        assert (witness.part1, witness.part2) == ((0, 2), (1, 3))

    @pytest.mark.parametrize("seed", range(4))
    def test_matches_brute_force(self, seed):
        g = _generators.gnp(8, Fraction(1, 2), seed)

        witness = _extract.max_bip_induced_oracle(g)

        assert witness.verify(g)
        assert witness.avg_degree == testhelpers.brute_max_bipartite_density(
            g
        )

    @pytest.mark.parametrize("seed", range(4))
    def test_dominates_extractions(self, seed):
        g = _generators.gnp(8, Fraction(1, 2), seed)
        _, dist = _flattened(g)
        _, coloring = _coloring.chromatic_number_exact(g)
        oracle = _extract.max_bip_induced_oracle(g)

        assert oracle.avg_degree >= max(
            _extract.extract_from_distribution(g, dist).avg_degree,
            _extract.extract_from_coloring(g, coloring).avg_degree,
        )

    def test_budget(self):
        with pytest.raises(_exceptions.BudgetExceededError):
            _extract.max_bip_induced_oracle(_generators.cycle(17))
