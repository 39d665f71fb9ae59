import networkx as nx
import pytest

from repobee_sepchoose import _catalog, _exceptions


class TestAtlasGraphs:
    def test_connected_graphs_up_to_four_vertices(self):
        graphs = _catalog.atlas_graphs(4)

        assert len(graphs) == 10
        assert all(
            nx.is_connected(_catalog.to_networkx(g)) for g in graphs
        )

    def test_all_graphs_up_to_four_vertices(self):
        assert len(_catalog.atlas_graphs(4, connected_only=False)) == 18

    def test_rejects_sizes_beyond_the_atlas(self):
        with pytest.raises(_exceptions.ParameterError):
            _catalog.atlas_graphs(_catalog.ATLAS_MAX_VERTICES + 1)


def test_networkx_conversion(petersen):
    converted = _catalog.from_networkx(nx.petersen_graph())

    assert nx.is_isomorphic(
        _catalog.to_networkx(converted), _catalog.to_networkx(petersen)
    )
    assert _catalog.from_networkx(_catalog.to_networkx(petersen)) == petersen


class TestRandomConnectedSample:
    def test_graphs_are_connected_and_pairwise_non_isomorphic(self):
        sample = _catalog.random_connected_sample(6, 15, seed=2)
        graphs = [_catalog.to_networkx(g) for g in sample]

        assert 0 < len(sample) <= 15
        assert all(nx.is_connected(graph) for graph in graphs)
        assert not any(
            nx.is_isomorphic(graphs[i], graphs[j])
            for i in range(len(graphs))
            for j in range(i)
        )

    def test_is_seeded(self):
        first = _catalog.random_connected_sample(6, 5, seed=4)
        second = _catalog.random_connected_sample(6, 5, seed=4)

        assert first == second


class TestConnectedGraphs:
    def test_counts_match_the_atlas(self):
        counts = [len(_catalog.connected_graphs(n)) for n in range(1, 8)]

        assert counts == [1, 1, 2, 6, 21, 112, 853]

    def test_extension_gives_every_connected_graph(self):
        extended = _catalog.extend_by_vertex(_catalog.connected_graphs(5))
        graphs = [_catalog.to_networkx(g) for g in extended]

        # 112 pairwise non-isomorphic connected graphs on six vertices
        assert len(graphs) == 112
        assert all(
            g.number_of_nodes() == 6 and nx.is_connected(g) for g in graphs
        )
        assert not any(
            nx.is_isomorphic(graphs[i], graphs[j])
            for i in range(len(graphs))
            for j in range(i)
        )

    def test_eight_vertices(self):
        graphs = _catalog.connected_graphs(8)

        assert len(graphs) == 11117
        assert all(g.n == 8 for g in graphs)

    @pytest.mark.parametrize("n", [0, _catalog.CATALOG_MAX_VERTICES + 1])
    def test_rejects_sizes_outside_the_catalog(self, n):
        with pytest.raises(_exceptions.ParameterError):
            _catalog.connected_graphs(n)


def test_catalog_without_sample_is_the_atlas():
    assert _catalog.catalog(4, sample_count=0) == _catalog.atlas_graphs(4)


def test_catalog_sample_is_one_vertex_larger():
    graphs = _catalog.catalog(4, sample_count=3, seed=1)

    assert graphs[:10] == _catalog.atlas_graphs(4)
    assert [g.n for g in graphs[10:]] == [5, 5, 5]
