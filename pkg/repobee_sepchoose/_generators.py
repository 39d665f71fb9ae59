"""Seeded random-graph constructions and fixed fixtures.

.. module:: _generators
    :synopsis: Binomial random graphs and the deletion constructions that
        make them triangle-free, K_r-free or of high girth.

All deletion constructions follow one rule: while a forbidden structure
remains, take the one whose smallest vertex is lowest and delete that
vertex. Because a structure whose smallest vertex is ``x`` only uses vertices
``>= x``, and deletions happen in increasing vertex order, the vertices that
end up deleted are exactly the smallest vertices of the forbidden structures
of the initial sample. The constructions therefore scan the vertices once in
increasing order instead of re-enumerating after every deletion, with the
same result.
"""
import collections
import dataclasses
import enum
from fractions import Fraction
from typing import Callable, Optional, Tuple, Union

import daiquiri
import numpy as np

from repobee_sepchoose import _exceptions, _graph, _rng

LOGGER = daiquiri.getLogger(__file__)

Rational = Union[int, float, Fraction]

DEFAULT_CONSTANT = Fraction(1, 2)

TriangleFreeStats = collections.namedtuple(
    "TriangleFreeStats",
    [
        "n",
        "p",
        "initial_triangles",
        "triangle_bound",
        "triangles_within_bound",
        "vertices_deleted",
        "min_degree_before",
        "max_degree_before",
        "min_degree_after",
        "max_degree_after",
        "n_after",
        "edges_after",
        "window_low",
        "window_high",
        "window_fraction",
        "all_in_window",
    ],
)

DeletionStats = collections.namedtuple(
    "DeletionStats",
    "n p vertices_deleted min_degree_before max_degree_before "
    "min_degree_after max_degree_after n_after edges_after",
)


class GraphKind(enum.Enum):
    GNP = "gnp"
    TRIANGLE_FREE = "triangle_free"
    KR_FREE = "kr_free"
    HIGH_GIRTH = "high_girth"
    COMPLETE_BIPARTITE = "complete_bipartite"
    CYCLE = "cycle"
    NAMED_FIXTURE = "named_fixture"


@dataclasses.dataclass(frozen=True)
class GenSpec:
    """A complete, reproducible description of a graph to generate."""

    kind: GraphKind
    n: int = 0
    seed: int = 0
    p: Optional[Rational] = None
    D: Optional[Rational] = None
    r: Optional[int] = None
    g: Optional[int] = None
    c: Rational = DEFAULT_CONSTANT
    a: Optional[int] = None
    b: Optional[int] = None
    name: Optional[str] = None

    def __post_init__(self):
        object.__setattr__(self, "kind", GraphKind(self.kind))
        if self.n < 0:
            raise _exceptions.ParameterError(f"n must be >= 0: {self.n}")
        _rng._check_seed(self.seed)
        required = {
            GraphKind.GNP: ["p"],
            GraphKind.TRIANGLE_FREE: ["D"],
            GraphKind.KR_FREE: ["r"],
            GraphKind.HIGH_GIRTH: ["g"],
            GraphKind.COMPLETE_BIPARTITE: ["a", "b"],
            GraphKind.CYCLE: [],
            GraphKind.NAMED_FIXTURE: ["name"],
        }[self.kind]
        missing = [f for f in required if getattr(self, f) is None]
        if missing:
            raise _exceptions.ParameterError(
                f"kind {self.kind.value} requires parameter(s): "
                + ", ".join(missing)
            )
        if self.p is not None:
            _check_probability(self.p)
        if self.D is not None:
            _check_triangle_constant(self.D)
        if self.r is not None and self.r < 3:
            raise _exceptions.ParameterError(f"r must be >= 3: {self.r}")
        if self.g is not None and self.g < 4:
            raise _exceptions.ParameterError(f"g must be >= 4: {self.g}")
        if Fraction(self.c) <= 0:
            raise _exceptions.ParameterError(f"c must be > 0: {self.c}")


def generate(spec: GenSpec) -> Tuple[_graph.Graph, Optional[dict]]:
    """Generate the graph described by ``spec``.

    Returns:
        The graph and, for the deletion constructions, their statistics as a
        dict (None otherwise).
    """
    if spec.kind == GraphKind.GNP:
        return gnp(spec.n, spec.p, spec.seed), None
    if spec.kind == GraphKind.TRIANGLE_FREE:
        graph, stats = triangle_free_construction(spec.n, spec.D, spec.seed)
        return graph, stats._asdict()
    if spec.kind == GraphKind.KR_FREE:
        graph, stats = _kr_free(spec.n, spec.r, spec.seed, spec.c)
        return graph, stats._asdict()
    if spec.kind == GraphKind.HIGH_GIRTH:
        graph, stats = _high_girth(spec.n, spec.g, spec.seed, spec.c)
        return graph, stats._asdict()
    if spec.kind == GraphKind.COMPLETE_BIPARTITE:
        return complete_bipartite(spec.a, spec.b), None
    if spec.kind == GraphKind.CYCLE:
        return cycle(spec.n), None
    return named_fixture(spec.name), None


def gnp(n: int, p: Rational, seed: int) -> _graph.Graph:
    """Binomial random graph: each of the ``n choose 2`` pairs is an edge
    independently with probability ``p``.

    The pair of rank ``k`` is decided by the ``k``-th draw of the Philox
    stream keyed by ``seed``, see :py:mod:`_rng`.
    """
    _check_probability(p)
    threshold = float(p)
    edges = []
    for i, draws in _rng.pair_rows(n, seed):
        for j in np.nonzero(draws < threshold)[0]:
            edges.append((i, i + 1 + int(j)))
    return _graph.Graph(n, edges)


def triangle_free_construction(
    n: int, D: Rational, seed: int
) -> Tuple[_graph.Graph, TriangleFreeStats]:
    """Sample ``gnp(n, D n^(-2/3))`` and delete the smallest vertex of every
    triangle.

    Args:
        n: Number of vertices of the sample.
        D: Density constant, ``0 < D < 2^(-1/4)``.
        seed: Seed of the sample.
    Returns:
        The triangle-free graph (relabeled to ``0..n'-1``) and statistics.
    """
    _check_triangle_constant(D)
    p = _scaled_probability(D, n, Fraction(-2, 3))
    sample = gnp(n, p, seed)
    initial_triangles = len(_graph.list_triangles(sample))
    graph, deletion = _delete_minimum_vertices(sample, p, _is_min_of_triangle)
    low, high = degree_window(n, D)
    degrees = graph.degrees()
    inside = sum(1 for d in degrees if low <= d <= high)
    bound = triangle_bound(n, D)
    stats = TriangleFreeStats(
        initial_triangles=initial_triangles,
        triangle_bound=float(bound),
        triangles_within_bound=initial_triangles <= bound,
        window_low=low,
        window_high=high,
        window_fraction=inside / len(degrees) if degrees else 0.0,
        all_in_window=bool(degrees) and inside == len(degrees),
        **deletion._asdict(),
    )
    return graph, stats


def kr_free_construction(
    n: int, r: int, seed: int, c: Rational = DEFAULT_CONSTANT
) -> _graph.Graph:
    """Sample ``gnp(n, c n^(-2/r))`` and delete the smallest vertex of every
    clique on ``r`` vertices.
    """
    return _kr_free(n, r, seed, c)[0]


def high_girth_construction(
    n: int, g: int, seed: int, c: Rational = DEFAULT_CONSTANT
) -> _graph.Graph:
    """Sample ``gnp(n, c n^(-1 + 1/(g-1)))`` and delete the smallest vertex of
    every cycle shorter than ``g``.
    """
    return _high_girth(n, g, seed, c)[0]


def _kr_free(
    n: int, r: int, seed: int, c: Rational
) -> Tuple[_graph.Graph, DeletionStats]:
    if r < 3:
        raise _exceptions.ParameterError(f"r must be >= 3: {r}")
    p = _scaled_probability(c, n, Fraction(-2, r))
    sample = gnp(n, p, seed)
    return _delete_minimum_vertices(
        sample,
        p,
        lambda g, v: _graph.find_clique(g, r, minimum=v) is not None,
    )


def _high_girth(
    n: int, g: int, seed: int, c: Rational
) -> Tuple[_graph.Graph, DeletionStats]:
    if g < 4:
        raise _exceptions.ParameterError(f"g must be >= 4: {g}")
    p = _scaled_probability(c, n, Fraction(-1) + Fraction(1, g - 1))
    sample = gnp(n, p, seed)
    return _delete_minimum_vertices(
        sample,
        p,
        lambda host, v: _graph.shortest_cycle_through(
            host, v, limit=g, allowed=v
        )
        < g,
    )


def _delete_minimum_vertices(
    sample: _graph.Graph,
    p: float,
    is_minimum_of_forbidden: Callable[[_graph.Graph, int], bool],
) -> Tuple[_graph.Graph, DeletionStats]:
    """Delete every vertex that is the smallest vertex of a forbidden
    structure. The predicate only has to look at vertices ``>= v``.
    """
    deleted = [
        v for v in sample.vertices if is_minimum_of_forbidden(sample, v)
    ]
    survivors = sorted(set(sample.vertices) - set(deleted))
    graph = _graph.induced_subgraph(sample, survivors).graph
    LOGGER.info(
        f"Deleted {len(deleted)} of {sample.n} vertices, "
        f"{graph.n} vertices and {graph.num_edges} edges remain"
    )
    stats = DeletionStats(
        n=sample.n,
        p=p,
        vertices_deleted=len(deleted),
        min_degree_before=sample.min_degree(),
        max_degree_before=sample.max_degree(),
        min_degree_after=graph.min_degree(),
        max_degree_after=graph.max_degree(),
        n_after=graph.n,
        edges_after=graph.num_edges,
    )
    return graph, stats


def delete_triangles(sample: _graph.Graph) -> _graph.Graph:
    """Delete the smallest vertex of every triangle of ``sample``."""
    return _delete_minimum_vertices(sample, None, _is_min_of_triangle)[0]


def _is_min_of_triangle(g: _graph.Graph, v: int) -> bool:
    higher = [u for u in g.neighbors(v) if u > v]
    return any(
        w > u for u in higher for w in g.neighbors(u) & g.neighbors(v)
    )


def degree_window(n: int, D: Rational) -> Tuple[float, float]:
    """The degree window ``[D(1-2D^4)n^(1/3)/4, 3Dn^(1/3)/2]`` that every
    vertex of the triangle-free construction lands in for large ``n``.

    At practical sizes the upper end is still loose: with ``n = 10^4`` and
    ``D = 1/2`` roughly 4.5% of the final degrees lie above it, so a run
    with every vertex inside is rare. Callers therefore check the share of
    vertices inside (``TriangleFreeStats.window_fraction``, at least 0.8 in
    the generators suite) for each seed, not ``all_in_window``.
    """
    D = float(D)
    root = n ** (1 / 3)
    return D * (1 - 2 * D ** 4) * root / 4, 3 * D * root / 2


def triangle_bound(n: int, D: Rational) -> Fraction:
    """``D^3 n / 3``: the initial sample has at least this many triangles
    with probability at most 1/2.
    """
    return Fraction(D) ** 3 * n / 3


def complete_bipartite(a: int, b: int) -> _graph.Graph:
    """``K_{a,b}`` with parts ``0..a-1`` and ``a..a+b-1``."""
    return _graph.Graph(
        a + b, [(u, v) for u in range(a) for v in range(a, a + b)]
    )


def complete_graph(n: int) -> _graph.Graph:
    return _graph.Graph(
        n, [(u, v) for u in range(n) for v in range(u + 1, n)]
    )


def cycle(n: int) -> _graph.Graph:
    if n < 3:
        raise _exceptions.ParameterError(f"a cycle needs n >= 3, got {n}")
    return _graph.Graph(n, [(v, (v + 1) % n) for v in range(n)])


def path_graph(n: int) -> _graph.Graph:
    return _graph.Graph(n, [(v, v + 1) for v in range(n - 1)])


def _petersen() -> _graph.Graph:
    outer = [(v, (v + 1) % 5) for v in range(5)]
    spokes = [(v, v + 5) for v in range(5)]
    inner = [(v + 5, (v + 2) % 5 + 5) for v in range(5)]
    return _graph.Graph(10, outer + spokes + inner)


def _grotzsch() -> _graph.Graph:
    # Mycielskian of C_5: shadow i + 5 copies the cycle neighbors of i, and
    # vertex 10 is joined to every shadow.
    c5 = [(v, (v + 1) % 5) for v in range(5)]
    shadows = [(u + 5, w) for u, w in c5] + [(w + 5, u) for u, w in c5]
    apex = [(v + 5, 10) for v in range(5)]
    return _graph.Graph(11, c5 + shadows + apex)


NAMED_FIXTURES = {
    "petersen": _petersen,
    "grotzsch": _grotzsch,
    "k4": lambda: complete_graph(4),
    "c5": lambda: cycle(5),
}


def named_fixture(name: str) -> _graph.Graph:
    try:
        return NAMED_FIXTURES[name]()
    except KeyError as exc:
        raise _exceptions.ParameterError(
            f"unknown fixture '{name}', known fixtures: "
            + ", ".join(sorted(NAMED_FIXTURES))
        ) from exc


def _scaled_probability(c: Rational, n: int, exponent: Fraction) -> float:
    if n <= 1:
        return 0.0
    return min(1.0, float(c) * n ** float(exponent))


def _check_probability(p: Rational) -> None:
    if not 0 <= Fraction(p) <= 1:
        raise _exceptions.ParameterError(f"p must be in [0, 1]: {p}")


def _check_triangle_constant(D: Rational) -> None:
    D = Fraction(D)
    if not (D > 0 and D ** 4 < Fraction(1, 2)):
        raise _exceptions.ParameterError(
            f"D must satisfy 0 < D < 2^(-1/4): {float(D)}"
        )
