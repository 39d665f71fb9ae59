"""Small-graph catalog for exhaustive property checks.

.. module:: _catalog
    :synopsis: Every connected graph on up to eight vertices, from the
        networkx graph atlas and one-vertex extensions of it, plus seeded
        isomorphism-free samples of larger connected graphs.
"""
import collections
import functools
from typing import Dict, List, Sequence, Tuple

import daiquiri
import networkx as nx
from networkx.generators.atlas import graph_atlas_g

from repobee_sepchoose import _exceptions, _generators, _graph, _rng

LOGGER = daiquiri.getLogger(__file__)

ATLAS_MAX_VERTICES = 7
CATALOG_MAX_VERTICES = 8
DEFAULT_SAMPLE_COUNT = 200
SAMPLE_DENSITIES = (0.3, 0.5, 0.7)


def to_networkx(g: _graph.Graph) -> nx.Graph:
    graph = nx.Graph()
    graph.add_nodes_from(g.vertices)
    graph.add_edges_from(g.edges)
    return graph


def from_networkx(graph: nx.Graph) -> _graph.Graph:
    """Convert, relabeling nodes to ``0..n-1`` in sorted order."""
    index = {node: i for i, node in enumerate(sorted(graph.nodes))}
    return _graph.build_graph(
        len(index), [(index[u], index[v]) for u, v in graph.edges]
    )


def atlas_graphs(
    max_vertices: int = ATLAS_MAX_VERTICES, connected_only: bool = True
) -> List[_graph.Graph]:
    """All graphs of the atlas with ``1..max_vertices`` vertices, one per
    isomorphism class, optionally only the connected ones.
    """
    if max_vertices > ATLAS_MAX_VERTICES:
        raise _exceptions.ParameterError(
            f"the atlas only covers up to {ATLAS_MAX_VERTICES} vertices"
        )
    return [
        from_networkx(graph)
        for graph in graph_atlas_g()
        if 1 <= graph.number_of_nodes() <= max_vertices
        and (not connected_only or nx.is_connected(graph))
    ]


class _IsomorphismFilter:
    """Keeps one graph per isomorphism class. Candidates are bucketed by
    Weisfeiler-Lehman hash and compared with an exact isomorphism test
    inside their bucket.
    """

    def __init__(self):
        self._buckets: Dict[str, List[nx.Graph]] = collections.defaultdict(
            list
        )

    def add(self, graph: nx.Graph) -> bool:
        """Add ``graph`` unless an isomorphic graph was added before.

        Returns:
            True iff the graph was new.
        """
        bucket = self._buckets[nx.weisfeiler_lehman_graph_hash(graph)]
        if any(nx.is_isomorphic(graph, other) for other in bucket):
            return False
        bucket.append(graph)
        return True


def extend_by_vertex(graphs: Sequence[_graph.Graph]) -> List[_graph.Graph]:
    """One graph per isomorphism class among all graphs obtained by joining
    a new vertex to a non-empty subset of the vertices of a graph in
    ``graphs``.

    Every connected graph has a vertex whose removal leaves it connected, so
    given every connected graph on ``n`` vertices this yields every connected
    graph on ``n + 1`` vertices.
    """
    seen = _IsomorphismFilter()
    extended = []
    for g in graphs:
        for mask in range(1, 1 << g.n):
            joined = [(v, g.n) for v in g.vertices if mask >> v & 1]
            candidate = _graph.build_graph(g.n + 1, list(g.edges) + joined)
            if seen.add(to_networkx(candidate)):
                extended.append(candidate)
    return extended


@functools.lru_cache(maxsize=None)
def connected_graphs(n: int) -> Tuple[_graph.Graph, ...]:
    """Every connected graph on ``n`` vertices, one per isomorphism class.
    Sizes up to 7 come from the atlas, 8 from extending the 7-vertex graphs.

    Raises:
        ParameterError: If ``n`` is not in ``1..CATALOG_MAX_VERTICES``.
    """
    if not 1 <= n <= CATALOG_MAX_VERTICES:
        raise _exceptions.ParameterError(
            f"connected graphs are catalogued for 1 to "
            f"{CATALOG_MAX_VERTICES} vertices, not {n}"
        )
    if n <= ATLAS_MAX_VERTICES:
        return tuple(g for g in atlas_graphs(n) if g.n == n)
    graphs = extend_by_vertex(connected_graphs(n - 1))
    LOGGER.info(f"Enumerated {len(graphs)} connected graphs on {n} vertices")
    return tuple(graphs)


def random_connected_sample(
    n: int,
    count: int = DEFAULT_SAMPLE_COUNT,
    seed: int = 0,
    densities: Sequence[float] = SAMPLE_DENSITIES,
) -> List[_graph.Graph]:
    """Up to ``count`` pairwise non-isomorphic connected ``gnp(n, p)``
    graphs, with ``p`` cycling through ``densities`` from one attempt to the
    next.
    """
    seen = _IsomorphismFilter()
    sample = []
    attempts = 0
    while len(sample) < count and attempts < 20 * count:
        p = densities[attempts % len(densities)]
        g = _generators.gnp(n, p, _rng.derive_seed(seed, attempts))
        attempts += 1
        graph = to_networkx(g)
        if nx.is_connected(graph) and seen.add(graph):
            sample.append(g)
    LOGGER.info(
        f"Sampled {len(sample)} non-isomorphic connected graphs on {n} "
        f"vertices in {attempts} attempts"
    )
    return sample


def catalog(
    max_vertices: int = CATALOG_MAX_VERTICES,
    sample_count: int = 0,
    seed: int = 0,
) -> List[_graph.Graph]:
    """Every connected graph on ``1..max_vertices`` vertices, followed by up
    to ``sample_count`` sampled connected graphs on ``max_vertices + 1``
    vertices.
    """
    graphs = [
        g for n in range(1, max_vertices + 1) for g in connected_graphs(n)
    ]
    if sample_count:
        graphs += random_connected_sample(max_vertices + 1, sample_count, seed)
    return graphs
