"""Extraction of dense bipartite and semi-bipartite induced subgraphs.

.. module:: _extract
    :synopsis: Certified witnesses extracted from colourings, stable-set
        distributions and stable-set peeling, semi-bipartite search and a
        brute-force ground truth.

Every witness is recomputed from the host graph when it is built, so a
witness that exists has been verified. Ties are always broken towards the
lexicographically smallest witness.
"""
import collections
import dataclasses
import enum
from fractions import Fraction
from typing import Iterable, List, Optional, Tuple

import daiquiri

from repobee_sepchoose import (
    _coloring,
    _exceptions,
    _graph,
    _rng,
    _stable,
)

LOGGER = daiquiri.getLogger(__file__)

DEFAULT_PAIR_BUDGET = 10 ** 6
DEFAULT_ORACLE_VERTICES = 16
DEFAULT_SAMPLES = 1000
DEFAULT_LOCAL_SEARCH_STEPS = 2000

PeelingCover = collections.namedtuple(
    "PeelingCover", "classes leftover min_class_size class_count_bound"
)
PeelingCover.__doc__ = """Stable sets peeled off a graph, largest first.

``class_count_bound`` is ``n_covered / min_class_size``, an upper bound on
the number of classes implied by the smallest class.
"""

TrimResult = collections.namedtuple(
    "TrimResult", "a_trimmed before after certified"
)


class SemiMode(enum.Enum):
    EXACT = "exact"
    SAMPLED = "sampled"
    LOCAL_SEARCH = "local_search"


@dataclasses.dataclass(frozen=True)
class BipartiteWitness:
    """Two disjoint stable sets and the bipartite graph induced between
    them.
    """

    part1: _graph.VertexSet
    part2: _graph.VertexSet
    edge_count: int
    avg_degree: Fraction
    min_degree: int

    @property
    def size(self) -> int:
        return len(self.part1) + len(self.part2)

    def verify(self, g: _graph.Graph) -> bool:
        try:
            return bipartite_witness(g, self.part1, self.part2) == self
        except _exceptions.SepchooseError:
            return False


@dataclasses.dataclass(frozen=True)
class SemiBipartiteWitness:
    """A stable set and a disjoint vertex set. Only the edges between them
    count towards the density; edges inside ``other_part`` are ignored.
    """

    stable_part: _graph.VertexSet
    other_part: _graph.VertexSet
    cross_edge_count: int
    avg_degree: Fraction
    min_degree: int

    @property
    def size(self) -> int:
        return len(self.stable_part) + len(self.other_part)

    def verify(self, g: _graph.Graph) -> bool:
        try:
            return (
                semi_bipartite_witness(g, self.stable_part, self.other_part)
                == self
            )
        except _exceptions.SepchooseError:
            return False


def bipartite_witness(
    g: _graph.Graph, part1: Iterable[int], part2: Iterable[int]
) -> BipartiteWitness:
    """Build a witness from two parts, recomputing every field from ``g``.

    Raises:
        NotStableError: If a part is not stable.
        InvalidVertexSetError: If the parts are invalid or intersect.
    """
    part1 = _graph.vertex_set(g, part1)
    part2 = _graph.vertex_set(g, part2)
    _check_disjoint(part1, part2)
    for part in (part1, part2):
        if not g.is_stable(part):
            raise _exceptions.NotStableError(f"{list(part)} is not stable")
    edge_count, min_degree = _cross_counts(g, part1, part2)
    return BipartiteWitness(
        part1=part1,
        part2=part2,
        edge_count=edge_count,
        avg_degree=_density(edge_count, len(part1) + len(part2)),
        min_degree=min_degree,
    )


def semi_bipartite_witness(
    g: _graph.Graph, stable_part: Iterable[int], other_part: Iterable[int]
) -> SemiBipartiteWitness:
    """Build a semi-bipartite witness, recomputing every field from ``g``.

    Raises:
        NotStableError: If ``stable_part`` is not stable.
        InvalidVertexSetError: If the parts are invalid or intersect.
    """
    stable_part = _graph.vertex_set(g, stable_part)
    other_part = _graph.vertex_set(g, other_part)
    _check_disjoint(stable_part, other_part)
    if not g.is_stable(stable_part):
        raise _exceptions.NotStableError(
            f"{list(stable_part)} is not stable"
        )
    edge_count, min_degree = _cross_counts(g, stable_part, other_part)
    return SemiBipartiteWitness(
        stable_part=stable_part,
        other_part=other_part,
        cross_edge_count=edge_count,
        avg_degree=_density(edge_count, len(stable_part) + len(other_part)),
        min_degree=min_degree,
    )


def _check_disjoint(a: _graph.VertexSet, b: _graph.VertexSet) -> None:
    common = set(a) & set(b)
    if common:
        raise _exceptions.InvalidVertexSetError(
            f"parts share vertices {sorted(common)}"
        )


def _cross_counts(
    g: _graph.Graph, a: _graph.VertexSet, b: _graph.VertexSet
) -> Tuple[int, int]:
    a_set, b_set = set(a), set(b)
    degrees = [len(g.neighbors(v) & b_set) for v in a]
    degrees += [len(g.neighbors(v) & a_set) for v in b]
    return sum(degrees) // 2, min(degrees, default=0)


def _density(edge_count: int, vertex_count: int) -> Fraction:
    if vertex_count == 0:
        return Fraction(0)
    return Fraction(2 * edge_count, vertex_count)


def extract_from_distribution(
    g: _graph.Graph,
    dist: _coloring.StableSetDistribution,
    pair_budget: int = DEFAULT_PAIR_BUDGET,
) -> BipartiteWitness:
    """Derandomized extraction from a distribution with marginals ``1/k``.

    Scans all ordered pairs ``(S1, S2)`` of the support and keeps those with
    ``e(S1, S2) - (|S1| + |S2|) d / 2k >= 0``, ``d`` the average degree of
    ``g``. Such a pair exists because the expectation of that quantity over
    two independent draws is zero. After discarding ``S1 & S2`` from both
    sides, the densest of them is returned; its average degree is at least
    ``d / k``.

    Raises:
        PreconditionError: If the marginals are not all equal.
        BudgetExceededError: If there are more than ``pair_budget`` ordered
            support pairs.
    """
    dist.check(g)
    if not dist.has_uniform_marginals():
        raise _exceptions.PreconditionError(
            "distribution must have equal marginals; flatten it first"
        )
    if g.n == 0:
        return bipartite_witness(g, (), ())
    marginal = dist.marginals[0]
    if marginal == 0:
        raise _exceptions.PreconditionError("marginals must be positive")
    k = 1 / marginal
    pairs = len(dist.support) ** 2
    if pairs > pair_budget:
        raise _exceptions.BudgetExceededError(
            f"{pairs} support pairs", pair_budget
        )
    d = g.avg_degree()
    masks = g.adjacency_masks()
    sets = [(s, _graph._set_to_mask(s)) for s in dist.support]
    best_key, best_parts = None, None
    for s1, m1 in sets:
        for s2, m2 in sets:
            edges = sum(_graph._popcount(masks[v] & m2) for v in s1)
            if edges - Fraction(len(s1) + len(s2)) * d / (2 * k) < 0:
                continue
            common = m1 & m2
            part1 = _graph._mask_to_set(m1 & ~common)
            part2 = _graph._mask_to_set(m2 & ~common)
            key = (-_density(edges, len(part1) + len(part2)), part1, part2)
            if best_key is None or key < best_key:
                best_key, best_parts = key, (part1, part2)
    if best_parts is None:
        raise _exceptions.PreconditionError(
            "no support pair reaches the expected density"
        )
    witness = bipartite_witness(g, *best_parts)
    LOGGER.info(
        f"Extracted bipartite witness of average degree {witness.avg_degree}"
        f" from {len(dist.support)} stable sets (k = {k})"
    )
    return witness


def extract_from_coloring(
    g: _graph.Graph, c: _coloring.ProperColoring
) -> BipartiteWitness:
    """Take the pair of colour classes with the most edges per vertex and
    peel the bipartite graph between them down to minimum degree
    ``delta / 2k``, ``delta`` the minimum degree of ``g``.
    """
    c.check(g)
    classes = c.classes()
    best_key, best_pair = None, None
    for i in range(c.k):
        for j in range(i + 1, c.k):
            size = len(classes[i]) + len(classes[j])
            ratio = Fraction(
                _graph.edges_between(g, classes[i], classes[j]), size
            )
            if best_key is None or ratio > best_key:
                best_key, best_pair = ratio, (i, j)
    if best_pair is None:
        return bipartite_witness(g, (), ())
    first, second = (classes[i] for i in best_pair)
    sub = _graph.induced_subgraph(g, first + second)
    threshold = Fraction(g.min_degree(), 2 * c.k)
    peeled = _graph.peel_to_min_degree(sub.graph, threshold)
    kept = {sub.labels[v] for v in peeled}
    witness = bipartite_witness(
        g,
        (v for v in first if v in kept),
        (v for v in second if v in kept),
    )
    LOGGER.info(
        f"Classes {best_pair} peeled at {threshold} give a witness of "
        f"minimum degree {witness.min_degree}"
    )
    return witness


def aks_peeling_coloring(
    g: _graph.Graph,
    threshold: int,
    budget: int = _stable.DEFAULT_SEARCH_BUDGET,
) -> PeelingCover:
    """Remove maximum stable sets while more than ``threshold`` vertices
    remain.

    Returns:
        The removed classes, which properly colour their union, and the
        leftover vertices.
    """
    remaining = tuple(g.vertices)
    classes: List[_graph.VertexSet] = []
    while remaining and len(remaining) > threshold:
        sub = _graph.induced_subgraph(g, remaining)
        stable = _stable.max_stable_set(sub.graph, budget)
        cls = tuple(sub.labels[v] for v in stable)
        classes.append(cls)
        removed = set(cls)
        remaining = tuple(v for v in remaining if v not in removed)
    covered = g.n - len(remaining)
    min_size = min((len(cls) for cls in classes), default=0)
    bound = Fraction(covered, min_size) if min_size else Fraction(0)
    LOGGER.info(
        f"Peeled {len(classes)} stable sets, {len(remaining)} vertices left"
    )
    return PeelingCover(
        classes=classes,
        leftover=remaining,
        min_class_size=min_size,
        class_count_bound=bound,
    )


def extract_from_cover(
    g: _graph.Graph, cover: PeelingCover
) -> BipartiteWitness:
    """Extract from the subgraph covered by the peeled classes, using the
    classes as a proper colouring of it.
    """
    covered = sorted(v for cls in cover.classes for v in cls)
    sub = _graph.induced_subgraph(g, covered)
    index = {v: i for i, v in enumerate(sub.labels)}
    colors = [0] * sub.graph.n
    for c, cls in enumerate(cover.classes):
        for v in cls:
            colors[index[v]] = c
    coloring = _coloring.ProperColoring(
        colors=tuple(colors), k=len(cover.classes)
    )
    local = extract_from_coloring(sub.graph, coloring)
    return bipartite_witness(
        g,
        (sub.labels[v] for v in local.part1),
        (sub.labels[v] for v in local.part2),
    )


def best_semi_bipartite(
    g: _graph.Graph,
    mode: SemiMode = SemiMode.EXACT,
    seed: int = 0,
    samples: int = DEFAULT_SAMPLES,
    steps: int = DEFAULT_LOCAL_SEARCH_STEPS,
    budget: int = _stable.DEFAULT_STABLE_SET_BUDGET,
) -> SemiBipartiteWitness:
    """Search for a dense semi-bipartite induced subgraph ``(S, V - S)`` with
    ``S`` stable, both sides trimmed of vertices without cross edges.

    The exact mode maximizes over every stable set; its optimum is at least
    ``ln(delta) / 2`` for minimum degree ``delta >= 1``. The sampled mode
    keeps the best of ``samples`` uniform stable sets, and the local search
    mode hill-climbs for ``steps`` seeded add/drop/swap proposals.

    Raises:
        BudgetExceededError: In exact mode, if there are more than ``budget``
            stable sets.
    """
    mode = SemiMode(mode)
    if mode == SemiMode.EXACT:
        family = _stable.enumerate_stable_sets(g, budget)
        best = _best_semi(g, (s for s in family.all_sets if s))
    elif mode == SemiMode.SAMPLED:
        best = _best_semi(g, _sampled_stable_sets(g, seed, samples, budget))
    else:
        best = _local_search(g, seed, steps)
    LOGGER.info(
        f"Semi-bipartite {mode.value} search found average degree "
        f"{best.avg_degree}"
    )
    return best


def _trimmed_semi(g: _graph.Graph, s: Iterable[int]) -> SemiBipartiteWitness:
    s = tuple(s)
    members = set(s)
    stable = [v for v in s if g.degree(v) > 0]
    other = sorted({u for v in s for u in g.neighbors(v)} - members)
    return semi_bipartite_witness(g, stable, other)


def _semi_key(w: SemiBipartiteWitness):
    return (-w.avg_degree, w.stable_part, w.other_part)


def _best_semi(g: _graph.Graph, sets) -> SemiBipartiteWitness:
    best = semi_bipartite_witness(g, (), ())
    for s in sets:
        candidate = _trimmed_semi(g, s)
        if _semi_key(candidate) < _semi_key(best):
            best = candidate
    return best


def _sampled_stable_sets(
    g: _graph.Graph, seed: int, samples: int, budget: int
) -> List[_graph.VertexSet]:
    rng = _rng.make_rng(seed)
    try:
        family = _stable.enumerate_stable_sets(g, budget)
    except _exceptions.BudgetExceededError:
        LOGGER.warning(
            f"More than {budget} stable sets, sampling random maximal "
            "stable sets instead of uniform ones"
        )
        return [_random_maximal_stable_set(g, rng) for _ in range(samples)]
    return [_stable.sample_uniform(family, rng) for _ in range(samples)]


def _random_maximal_stable_set(g: _graph.Graph, rng) -> _graph.VertexSet:
    chosen: set = set()
    blocked: set = set()
    for v in rng.permutation(g.n):
        v = int(v)
        if v not in blocked:
            chosen.add(v)
            blocked |= g.neighbors(v) | {v}
    return tuple(sorted(chosen))


class _SemiState:
    """A stable set with incrementally maintained cross statistics."""

    def __init__(self, g: _graph.Graph):
        self.g = g
        self.members: set = set()
        self.hits = [0] * g.n
        self.cross = 0
        self.active_stable = 0
        self.active_other = 0

    def add(self, v: int) -> None:
        d = self.g.degree(v)
        self.members.add(v)
        self.cross += d
        self.active_stable += d > 0
        for u in self.g.neighbors(v):
            self.hits[u] += 1
            if self.hits[u] == 1:
                self.active_other += 1

    def remove(self, v: int) -> None:
        d = self.g.degree(v)
        self.members.discard(v)
        self.cross -= d
        self.active_stable -= d > 0
        for u in self.g.neighbors(v):
            self.hits[u] -= 1
            if self.hits[u] == 0:
                self.active_other -= 1

    def value(self) -> Fraction:
        return _density(self.cross, self.active_stable + self.active_other)


def _local_search(
    g: _graph.Graph, seed: int, steps: int
) -> SemiBipartiteWitness:
    rng = _rng.make_rng(seed)
    state = _SemiState(g)
    for v in _random_maximal_stable_set(g, rng):
        state.add(v)
    best_members = tuple(sorted(state.members))
    best_value = state.value()
    for _ in range(steps if g.n else 0):
        v = int(rng.integers(g.n))
        current = state.value()
        if v in state.members:
            state.remove(v)
            undo = [("add", v)]
        else:
            evicted = [u for u in g.neighbors(v) if u in state.members]
            for u in evicted:
                state.remove(u)
            state.add(v)
            undo = [("remove", v)] + [("add", u) for u in evicted]
        if state.value() < current:
            for op, u in undo:
                getattr(state, op)(u)
            continue
        if state.value() > best_value:
            best_value = state.value()
            best_members = tuple(sorted(state.members))
    return _trimmed_semi(g, best_members)


def trim_equal_parts(
    g: _graph.Graph, a: Iterable[int], b: Iterable[int]
) -> TrimResult:
    """Keep the ``|b|`` vertices of ``a`` with the most neighbours in ``b``
    (ties by lowest id). The bipartite graph between the kept part and ``b``
    has at least half the average degree of the one between ``a`` and
    ``b``.

    Raises:
        PreconditionError: If ``a`` and ``b`` intersect or ``|a| < |b|``.
    """
    a = _graph.vertex_set(g, a)
    b = _graph.vertex_set(g, b)
    if set(a) & set(b):
        raise _exceptions.PreconditionError("a and b must be disjoint")
    if len(a) < len(b):
        raise _exceptions.PreconditionError(
            f"|a| = {len(a)} is smaller than |b| = {len(b)}"
        )
    b_set = set(b)
    into_b = {v: len(g.neighbors(v) & b_set) for v in a}
    ranked = sorted(a, key=lambda v: (-into_b[v], v))
    trimmed = tuple(sorted(ranked[: len(b)]))
    before = _density(sum(into_b.values()), len(a) + len(b))
    after = _density(sum(into_b[v] for v in trimmed), 2 * len(b))
    return TrimResult(
        a_trimmed=trimmed,
        before=before,
        after=after,
        certified=after >= before / 2,
    )


def max_bip_induced_oracle(
    g: _graph.Graph, vertex_budget: int = DEFAULT_ORACLE_VERTICES
) -> BipartiteWitness:
    """The densest induced bipartite subgraph, by trying every vertex
    subset. Ties go to the lexicographically smallest vertex set.

    Raises:
        BudgetExceededError: If ``g`` has more than ``vertex_budget``
            vertices.
    """
    if g.n > vertex_budget:
        raise _exceptions.BudgetExceededError(
            f"brute force over {g.n} vertices", vertex_budget
        )
    masks = g.adjacency_masks()
    best_key: Optional[tuple] = None
    best_set: _graph.VertexSet = ()
    for subset in range(1 << g.n):
        members = _graph._mask_to_set(subset)
        twice_edges = sum(
            _graph._popcount(masks[v] & subset) for v in members
        )
        key = (-Fraction(twice_edges, len(members) or 1), members)
        if best_key is not None and key >= best_key:
            continue
        sub = _graph.induced_subgraph(g, members).graph
        if _graph.is_bipartite(sub).is_bipartite:
            best_key, best_set = key, members
    sub = _graph.induced_subgraph(g, best_set)
    sides = _graph.is_bipartite(sub.graph).coloring
    return bipartite_witness(
        g,
        (sub.labels[i] for i, side in enumerate(sides) if side == 0),
        (sub.labels[i] for i, side in enumerate(sides) if side == 1),
    )
