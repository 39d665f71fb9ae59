"""Simple undirected graphs and the structural queries built on them.

.. module:: _graph
    :synopsis: Immutable simple graph with degeneracy, girth, triangle,
        clique, bipartiteness and peeling queries.
"""
import collections
import heapq
import math
from fractions import Fraction
from typing import (
    Dict,
    FrozenSet,
    Iterable,
    List,
    Optional,
    Sequence,
    Tuple,
    Union,
)

from repobee_sepchoose import _exceptions

VertexSet = Tuple[int, ...]
Edge = Tuple[int, int]


class Graph:
    """A simple undirected graph on the vertices ``0..n-1``.

    Graphs are immutable after construction. Use :py:func:`build_graph` to
    create one from an edge list, which validates the input.
    """

    __slots__ = ("_n", "_edges", "_adj", "_masks")

    def __init__(self, n: int, edges: Sequence[Edge]):
        adj = [set() for _ in range(n)]
        for u, v in edges:
            adj[u].add(v)
            adj[v].add(u)
        self._n = n
        self._edges = tuple(sorted((min(e), max(e)) for e in edges))
        self._adj = tuple(frozenset(nbrs) for nbrs in adj)
        self._masks = None

    @property
    def n(self) -> int:
        return self._n

    @property
    def vertices(self) -> range:
        return range(self._n)

    @property
    def edges(self) -> Tuple[Edge, ...]:
        """All edges as ``(u, v)`` pairs with ``u < v``, in ascending order."""
        return self._edges

    @property
    def num_edges(self) -> int:
        return len(self._edges)

    def neighbors(self, v: int) -> FrozenSet[int]:
        return self._adj[v]

    def degree(self, v: int) -> int:
        return len(self._adj[v])

    def degrees(self) -> List[int]:
        return [len(nbrs) for nbrs in self._adj]

    def has_edge(self, u: int, v: int) -> bool:
        return v in self._adj[u]

    def min_degree(self) -> int:
        return min(self.degrees(), default=0)

    def max_degree(self) -> int:
        return max(self.degrees(), default=0)

    def avg_degree(self) -> Fraction:
        if self._n == 0:
            return Fraction(0)
        return Fraction(2 * len(self._edges), self._n)

    def adjacency_masks(self) -> Tuple[int, ...]:
        """Neighborhoods as integer bitmasks, bit ``u`` set iff ``u ~ v``."""
        if self._masks is None:
            self._masks = tuple(
                sum(1 << u for u in nbrs) for nbrs in self._adj
            )
        return self._masks

    def is_stable(self, vertices: Iterable[int]) -> bool:
        members = set(vertices)
        return all(not (self._adj[v] & members) for v in members)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self._n == other._n and self._edges == other._edges

    def __hash__(self) -> int:
        return hash((self._n, self._edges))

    def __repr__(self) -> str:
        return f"Graph(n={self._n}, m={len(self._edges)})"


InducedSubgraph = collections.namedtuple("InducedSubgraph", "graph labels")
InducedSubgraph.__doc__ = """An induced subgraph together with its relabeling.

``labels[i]`` is the host vertex that became vertex ``i``.
"""

BipartiteCheck = collections.namedtuple(
    "BipartiteCheck", "is_bipartite coloring odd_cycle"
)


def build_graph(n: int, edge_list: Iterable[Sequence[int]]) -> Graph:
    """Build a graph from an edge list, rejecting malformed input.

    Args:
        n: Number of vertices.
        edge_list: Pairs of vertex ids in ``0..n-1``.
    Returns:
        The graph.
    Raises:
        VertexOutOfRangeError: An endpoint is outside ``0..n-1``.
        SelfLoopError: A pair ``(v, v)`` is present.
        DuplicateEdgeError: The same unordered pair occurs twice.
    """
    if n < 0:
        raise _exceptions.ParameterError(f"vertex count must be >= 0: {n}")
    seen = set()
    for pair in edge_list:
        u, v = pair
        for endpoint in (u, v):
            if not 0 <= endpoint < n:
                raise _exceptions.VertexOutOfRangeError(
                    f"endpoint {endpoint} of edge ({u}, {v}) is not in "
                    f"0..{n - 1}"
                )
        if u == v:
            raise _exceptions.SelfLoopError(f"self-loop at vertex {u}")
        key = (min(u, v), max(u, v))
        if key in seen:
            raise _exceptions.DuplicateEdgeError(
                f"duplicate edge ({key[0]}, {key[1]})"
            )
        seen.add(key)
    return Graph(n, list(seen))


def vertex_set(g: Graph, members: Iterable[int]) -> VertexSet:
    """Canonicalize ``members`` into a sorted, duplicate-free vertex set of
    ``g``.
    """
    result = tuple(sorted(set(members)))
    if result and not (0 <= result[0] and result[-1] < g.n):
        raise _exceptions.InvalidVertexSetError(
            f"vertex set {list(result)} is not contained in 0..{g.n - 1}"
        )
    return result


def degeneracy_order(g: Graph) -> Tuple[List[int], int]:
    """Repeatedly remove a minimum degree vertex (lowest id on ties).

    Returns:
        The removal order and the degeneracy, i.e. the largest degree a
        vertex had at the moment it was removed.
    """
    degree = g.degrees()
    heap = [(d, v) for v, d in enumerate(degree)]
    heapq.heapify(heap)
    removed = [False] * g.n
    order = []
    degeneracy = 0
    while heap:
        d, v = heapq.heappop(heap)
        if removed[v] or d != degree[v]:
            continue
        removed[v] = True
        order.append(v)
        degeneracy = max(degeneracy, d)
        for u in g.neighbors(v):
            if not removed[u]:
                degree[u] -= 1
                heapq.heappush(heap, (degree[u], u))
    return order, degeneracy


def girth(g: Graph) -> Union[int, float]:
    """Length of a shortest cycle, or ``math.inf`` for forests."""
    best = math.inf
    for root in g.vertices:
        dist = {root: 0}
        parent = {root: None}
        queue = collections.deque([root])
        while queue:
            u = queue.popleft()
            if 2 * dist[u] >= best:
                break
            for w in g.neighbors(u):
                if w not in dist:
                    dist[w] = dist[u] + 1
                    parent[w] = u
                    queue.append(w)
                elif w != parent[u]:
                    best = min(best, dist[u] + dist[w] + 1)
    return best


def shortest_cycle_through(
    g: Graph,
    root: int,
    limit: Union[int, float] = math.inf,
    allowed: Optional[int] = None,
) -> Union[int, float]:
    """Length of a shortest cycle through ``root``.

    Every vertex discovered by the BFS is labeled with the neighbor of
    ``root`` it descends from; a non-tree edge between two different labels
    closes a cycle through ``root``.

    Args:
        g: A graph.
        root: The vertex the cycle must pass through.
        limit: Only cycles shorter than ``limit`` are searched for.
        allowed: If given, only vertices with id ``>= allowed`` are used.
    Returns:
        The length of a shortest cycle through root shorter than limit, or
        ``math.inf`` if there is none.
    """
    floor = 0 if allowed is None else allowed
    depth = (limit - 1) // 2 if limit != math.inf else math.inf
    dist = {root: 0}
    parent = {root: None}
    branch = {root: root}
    queue = collections.deque([root])
    best = math.inf
    while queue:
        u = queue.popleft()
        if dist[u] > depth:
            continue
        for w in g.neighbors(u):
            if w < floor:
                continue
            if w not in dist:
                dist[w] = dist[u] + 1
                parent[w] = u
                branch[w] = w if u == root else branch[u]
                queue.append(w)
            elif w != parent[u] and branch[w] != branch[u]:
                best = min(best, dist[u] + dist[w] + 1)
    return best if best < limit else math.inf


def list_triangles(g: Graph) -> List[Tuple[int, int, int]]:
    """All triangles as ascending triples, in lexicographic order."""
    triangles = []
    for u in g.vertices:
        higher = sorted(v for v in g.neighbors(u) if v > u)
        for v in higher:
            for w in sorted(g.neighbors(u) & g.neighbors(v)):
                if w > v:
                    triangles.append((u, v, w))
    return triangles


def find_clique(
    g: Graph, r: int, minimum: Optional[int] = None
) -> Optional[VertexSet]:
    """Lexicographically first clique on ``r`` vertices.

    Args:
        g: A graph.
        r: Clique size.
        minimum: If given, only cliques whose smallest vertex is
            ``minimum`` are considered.
    Returns:
        The clique as a sorted tuple, or None if there is none.
    """
    if r <= 0:
        return ()
    roots = g.vertices if minimum is None else [minimum]
    for u in roots:
        candidates = sorted(v for v in g.neighbors(u) if v > u)
        found = _extend_clique(g, [u], candidates, r)
        if found is not None:
            return tuple(found)
    return None


def _extend_clique(
    g: Graph, clique: List[int], candidates: List[int], r: int
) -> Optional[List[int]]:
    if len(clique) == r:
        return clique
    if len(clique) + len(candidates) < r:
        return None
    for i, v in enumerate(candidates):
        rest = [w for w in candidates[i + 1 :] if w in g.neighbors(v)]
        found = _extend_clique(g, clique + [v], rest, r)
        if found is not None:
            return found
    return None


def has_clique(g: Graph, r: int) -> bool:
    return find_clique(g, r) is not None


def max_clique(g: Graph) -> VertexSet:
    """A maximum clique, lexicographically smallest among the maximum ones."""
    masks = g.adjacency_masks()
    best = [0, 0]

    def _search(clique: int, size: int, candidates: int):
        if candidates == 0:
            if size > best[1]:
                best[0], best[1] = clique, size
            return
        if size + _popcount(candidates) <= best[1]:
            return
        v = _lowest_bit(candidates)
        _search(clique | (1 << v), size + 1, candidates & masks[v])
        _search(clique, size, candidates & ~(1 << v))

    _search(0, 0, (1 << g.n) - 1)
    return _mask_to_set(best[0])


def induced_subgraph(g: Graph, s: Iterable[int]) -> InducedSubgraph:
    """The subgraph induced by ``s``, relabeled to ``0..|s|-1`` in
    ascending order of host ids.
    """
    labels = vertex_set(g, s)
    index = {v: i for i, v in enumerate(labels)}
    edges = [
        (index[u], index[v])
        for u, v in g.edges
        if u in index and v in index
    ]
    return InducedSubgraph(graph=Graph(len(labels), edges), labels=labels)


def is_bipartite(g: Graph) -> BipartiteCheck:
    """Two-color ``g`` by BFS, components started at their lowest vertex.

    Returns:
        A BipartiteCheck whose ``coloring`` is a 0/1 list when bipartite, and
        whose ``odd_cycle`` lists the vertices of an odd cycle otherwise.
    """
    color: Dict[int, int] = {}
    parent: Dict[int, Optional[int]] = {}
    for root in g.vertices:
        if root in color:
            continue
        color[root] = 0
        parent[root] = None
        queue = collections.deque([root])
        while queue:
            u = queue.popleft()
            for w in sorted(g.neighbors(u)):
                if w not in color:
                    color[w] = 1 - color[u]
                    parent[w] = u
                    queue.append(w)
                elif color[w] == color[u]:
                    return BipartiteCheck(
                        False, None, _odd_cycle(parent, u, w)
                    )
    return BipartiteCheck(True, [color[v] for v in g.vertices], None)


def _odd_cycle(parent, u: int, w: int) -> List[int]:
    def _path_to_root(v):
        path = [v]
        while parent[path[-1]] is not None:
            path.append(parent[path[-1]])
        return path

    path_u = _path_to_root(u)
    path_w = _path_to_root(w)
    on_w = set(path_w)
    lca = next(v for v in path_u if v in on_w)
    head = path_u[: path_u.index(lca) + 1]
    tail = path_w[: path_w.index(lca)]
    return head + list(reversed(tail))


def peel_to_min_degree(
    g: Graph, threshold: Union[int, Fraction]
) -> VertexSet:
    """Repeatedly delete the lowest-id minimum-degree vertex while its degree
    is below ``threshold``.

    Returns:
        The surviving vertices; they induce a subgraph of minimum degree at
        least threshold, or the set is empty.
    """
    threshold = Fraction(threshold)
    degree = g.degrees()
    alive = [True] * g.n
    heap = [(d, v) for v, d in enumerate(degree)]
    heapq.heapify(heap)
    while heap:
        d, v = heap[0]
        if not alive[v] or d != degree[v]:
            heapq.heappop(heap)
            continue
        if d >= threshold:
            break
        heapq.heappop(heap)
        alive[v] = False
        for u in g.neighbors(v):
            if alive[u]:
                degree[u] -= 1
                heapq.heappush(heap, (degree[u], u))
    return tuple(v for v in g.vertices if alive[v])


def edges_between(g: Graph, a: Iterable[int], b: Iterable[int]) -> int:
    """Number of edges with one endpoint in ``a`` and the other in ``b``.
    The sets are assumed disjoint.
    """
    b_set = set(b)
    return sum(len(g.neighbors(v) & b_set) for v in a)


def _popcount(mask: int) -> int:
    return bin(mask).count("1")


def _lowest_bit(mask: int) -> int:
    return (mask & -mask).bit_length() - 1


def _mask_to_set(mask: int) -> VertexSet:
    members = []
    while mask:
        low = mask & -mask
        members.append(low.bit_length() - 1)
        mask ^= low
    return tuple(members)


def _set_to_mask(members: Iterable[int]) -> int:
    mask = 0
    for v in members:
        mask |= 1 << v
    return mask
