import math
from fractions import Fraction

import pytest

import testhelpers
from repobee_sepchoose import _exceptions, _generators, _graph


class TestBuildGraph:
    def test_edges_are_canonical(self):
        g = _graph.build_graph(4, [(3, 2), (1, 0), (2, 0)])

        assert g.edges == ((0, 1), (0, 2), (2, 3))
        assert g.degrees() == [2, 1, 2, 1]

    def test_empty_graph(self):
        g = _graph.build_graph(0, [])

        assert g.n == 0
        assert g.avg_degree() == 0
        assert g.min_degree() == 0

    @pytest.mark.parametrize(
        "n, edges, error",
        [
            (3, [(0, 3)], _exceptions.VertexOutOfRangeError),
            (3, [(-1, 0)], _exceptions.VertexOutOfRangeError),
            (3, [(1, 1)], _exceptions.SelfLoopError),
            (3, [(0, 1), (1, 0)], _exceptions.DuplicateEdgeError),
        ],
        ids=["too-large", "negative", "self-loop", "duplicate"],
    )
    def test_rejects_malformed_edges(self, n, edges, error):
        with pytest.raises(error):
            _graph.build_graph(n, edges)

    def test_malformed_edges_are_plug_errors(self):
        """The plugin layer relies on every input error being a
        SepchooseError.
        """
        with pytest.raises(_exceptions.SepchooseError):
            _graph.build_graph(2, [(0, 0)])

    def test_avg_degree_is_exact(self):
        g = _graph.build_graph(3, [(0, 1)])

        assert g.avg_degree() == Fraction(2, 3)


def test_vertex_set_canonicalizes(c5):
    assert _graph.vertex_set(c5, [3, 1, 1]) == (1, 3)


def test_vertex_set_rejects_foreign_vertices(c5):
    with pytest.raises(_exceptions.InvalidVertexSetError):
        _graph.vertex_set(c5, [5])


class TestDegeneracy:
    @pytest.mark.parametrize(
        "g, expected",
        [
            (_generators.complete_graph(4), 3),
            (_generators.cycle(5), 2),
            (_generators.path_graph(6), 1),
            (_generators.complete_bipartite(2, 3), 2),
            (_graph.build_graph(3, []), 0),
        ],
        ids=["k4", "c5", "p6", "k23", "empty"],
    )
    def test_degeneracy(self, g, expected):
        order, degeneracy = _graph.degeneracy_order(g)

        assert degeneracy == expected
        assert sorted(order) == list(g.vertices)

    def test_order_witnesses_degeneracy_on_all_small_graphs(
        self, small_graphs
    ):
        for g in small_graphs:
            order, degeneracy = _graph.degeneracy_order(g)
            position = {v: i for i, v in enumerate(order)}

            later = [
                sum(1 for u in g.neighbors(v) if position[u] > position[v])
                for v in order
            ]
            assert max(later) <= degeneracy, g.edges
            assert degeneracy == testhelpers.brute_degeneracy(g), g.edges


class TestGirth:
    @pytest.mark.parametrize(
        "g, expected",
        [
            (_generators.named_fixture("petersen"), 5),
            (_generators.cycle(7), 7),
            (_generators.complete_graph(4), 3),
            (_generators.complete_bipartite(3, 3), 4),
            (_generators.named_fixture("grotzsch"), 4),
            (_generators.path_graph(5), math.inf),
        ],
        ids=["petersen", "c7", "k4", "k33", "grotzsch", "path"],
    )
    def test_known_girths(self, g, expected):
        assert _graph.girth(g) == expected

    @pytest.mark.parametrize("seed", range(10))
    def test_matches_brute_force(self, seed):
        g = _generators.gnp(12, Fraction(1, 4), seed)

        assert _graph.girth(g) == testhelpers.brute_girth(g)

    def test_matches_brute_force_on_all_small_graphs(self, small_graphs):
        for g in small_graphs:
            assert _graph.girth(g) == testhelpers.brute_girth(g), g.edges


class TestShortestCycleThrough:
    def test_cycle_through_vertex_of_c5(self, c5):
        assert _graph.shortest_cycle_through(c5, 0) == 5

    def test_limit_is_exclusive(self, c5):
        assert _graph.shortest_cycle_through(c5, 0, limit=5) == math.inf
        assert _graph.shortest_cycle_through(c5, 0, limit=6) == 5

    def test_pendant_vertex_is_on_no_cycle(self):
        g = _graph.build_graph(4, [(0, 1), (1, 2), (2, 3), (1, 3)])

        assert _graph.shortest_cycle_through(g, 0) == math.inf
        assert _graph.shortest_cycle_through(g, 1) == 3

    def test_allowed_excludes_lower_vertices(self):
        g = _graph.build_graph(4, [(0, 1), (1, 2), (0, 2), (2, 3)])

        assert _graph.shortest_cycle_through(g, 1, allowed=1) == math.inf


class TestCliques:
    def test_list_triangles_of_k4(self):
        triangles = _graph.list_triangles(_generators.complete_graph(4))

        assert triangles == [(0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3)]

    def test_find_clique_is_lexicographically_first(self):
        k4 = _generators.complete_graph(4)

        assert _graph.find_clique(k4, 3) == (0, 1, 2)
        assert _graph.find_clique(k4, 3, minimum=1) == (1, 2, 3)

    def test_triangle_free_has_no_triangle(self, petersen):
        assert not _graph.has_clique(petersen, 3)
        assert _graph.has_clique(petersen, 2)

    def test_max_clique(self, c5):
        assert _graph.max_clique(c5) == (0, 1)
        assert _graph.max_clique(_generators.complete_graph(5)) == (
            0,
            1,
            2,
            3,
            4,
        )


def test_induced_subgraph_relabels(c5):
    sub = _graph.induced_subgraph(c5, [4, 0, 1])

    assert sub.labels == (0, 1, 4)
    assert sub.graph.edges == ((0, 1), (0, 2))


class TestIsBipartite:
    def test_even_cycle(self):
        check = _graph.is_bipartite(_generators.cycle(6))

        assert check.is_bipartite
        assert check.coloring == [0, 1, 0, 1, 0, 1]
        assert check.odd_cycle is None

    @pytest.mark.parametrize(
        "g",
        [
            _generators.cycle(5),
            _generators.complete_graph(4),
            _generators.named_fixture("petersen"),
        ],
        ids=["c5", "k4", "petersen"],
    )
    def test_odd_cycle_certificate(self, g):
        check = _graph.is_bipartite(g)

        assert not check.is_bipartite
        assert len(check.odd_cycle) % 2 == 1
        assert testhelpers.is_cycle(g, check.odd_cycle)


class TestPeelToMinDegree:
    def test_removes_pendant_vertex(self):
        g = _graph.build_graph(4, [(0, 1), (1, 2), (0, 2), (0, 3)])

        assert _graph.peel_to_min_degree(g, 2) == (0, 1, 2)

    def test_empty_when_threshold_unreachable(self):
        g = _graph.build_graph(4, [(0, 1), (1, 2), (0, 2), (0, 3)])

        assert _graph.peel_to_min_degree(g, 3) == ()

    def test_fractional_threshold(self, c5):
        assert _graph.peel_to_min_degree(c5, Fraction(3, 2)) == tuple(
            range(5)
        )
        assert _graph.peel_to_min_degree(c5, Fraction(5, 2)) == ()

    @pytest.mark.parametrize("seed", range(5))
    def test_result_has_min_degree(self, seed):
        g = _generators.gnp(20, Fraction(1, 4), seed)

        kept = _graph.peel_to_min_degree(g, 3)

        assert not kept or testhelpers.min_degree_within(g, kept) >= 3


def test_edges_between():
    k4 = _generators.complete_graph(4)

    assert _graph.edges_between(k4, [0, 1], [2, 3]) == 4
