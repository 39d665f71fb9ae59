"""Proper, exact and fractional colourings, and the stable-set distributions
they induce.

.. module:: _coloring
    :synopsis: Greedy colouring in degeneracy order, exact chromatic number
        by branch-and-bound, exact fractional chromatic number by rational
        LP, and conversion of colourings into stable-set distributions with
        exactly uniform marginals.
"""
import collections
import dataclasses
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

import daiquiri

from repobee_sepchoose import _exceptions, _graph, _simplex, _stable

LOGGER = daiquiri.getLogger(__file__)

DEFAULT_VERTEX_BUDGET = 20

DualityCheck = collections.namedtuple(
    "DualityCheck", "ok primal_value dual_value failures"
)


@dataclasses.dataclass(frozen=True)
class ProperColoring:
    """``colors[v]`` is the colour of ``v``, in ``0..k-1``."""

    colors: Tuple[int, ...]
    k: int

    def classes(self) -> List[_graph.VertexSet]:
        """The colour classes, class ``i`` holding the vertices of colour
        ``i`` in ascending order.
        """
        classes = [[] for _ in range(self.k)]
        for v, c in enumerate(self.colors):
            classes[c].append(v)
        return [tuple(cls) for cls in classes]

    def check(self, g: _graph.Graph) -> None:
        """Raise ``ParameterError`` unless this is a proper colouring of
        ``g`` with every class nonempty.
        """
        if len(self.colors) != g.n:
            raise _exceptions.ParameterError(
                f"colouring has {len(self.colors)} entries, graph has {g.n}"
            )
        if any(not 0 <= c < self.k for c in self.colors):
            raise _exceptions.ParameterError(
                f"colours must lie in 0..{self.k - 1}"
            )
        if set(self.colors) != set(range(self.k)):
            raise _exceptions.ParameterError("every colour class must be used")
        for u, v in g.edges:
            if self.colors[u] == self.colors[v]:
                raise _exceptions.ParameterError(
                    f"edge ({u}, {v}) is monochromatic"
                )


@dataclasses.dataclass(frozen=True)
class FractionalColoring:
    """An optimal solution of the covering LP over maximal stable sets.

    ``clique_weights`` is an optimal solution of the dual packing LP, a
    fractional clique of the same value.
    """

    n: int
    support: Tuple[_graph.VertexSet, ...]
    weights: Tuple[Fraction, ...]
    value: Fraction
    clique_weights: Tuple[Fraction, ...]

    def coverage(self) -> List[Fraction]:
        cover = [Fraction(0)] * self.n
        for s, w in zip(self.support, self.weights):
            for v in s:
                cover[v] += w
        return cover

    def check(self, g: _graph.Graph) -> None:
        if any(w <= 0 for w in self.weights):
            raise _exceptions.ParameterError("weights must be positive")
        if sum(self.weights, Fraction(0)) != self.value:
            raise _exceptions.ParameterError("value differs from weight sum")
        for s in self.support:
            if not g.is_stable(s):
                raise _exceptions.NotStableError(f"{list(s)} is not stable")
        uncovered = [v for v, c in enumerate(self.coverage()) if c < 1]
        if uncovered:
            raise _exceptions.ParameterError(
                f"vertices covered with weight below 1: {uncovered}"
            )


@dataclasses.dataclass(frozen=True)
class StableSetDistribution:
    """A finite probability distribution over stable sets.

    The support is sorted lexicographically and holds no duplicates.
    """

    n: int
    support: Tuple[_graph.VertexSet, ...]
    probabilities: Tuple[Fraction, ...]

    @property
    def marginals(self) -> Tuple[Fraction, ...]:
        """``Pr(v in S)`` for every vertex ``v``."""
        marginals = [Fraction(0)] * self.n
        for s, p in zip(self.support, self.probabilities):
            for v in s:
                marginals[v] += p
        return tuple(marginals)

    def min_marginal(self) -> Fraction:
        return min(self.marginals, default=Fraction(1))

    def has_uniform_marginals(self) -> bool:
        return len(set(self.marginals)) <= 1

    def check(self, g: _graph.Graph) -> None:
        if g.n != self.n:
            raise _exceptions.ParameterError(
                f"distribution is over {self.n} vertices, graph has {g.n}"
            )
        if any(p <= 0 for p in self.probabilities):
            raise _exceptions.ParameterError("probabilities must be positive")
        if sum(self.probabilities, Fraction(0)) != 1:
            raise _exceptions.ParameterError("probabilities must sum to 1")
        for s in self.support:
            if not g.is_stable(s):
                raise _exceptions.NotStableError(f"{list(s)} is not stable")


def make_distribution(
    n: int, weighted_sets: Sequence[Tuple[_graph.VertexSet, Fraction]]
) -> StableSetDistribution:
    """Build a distribution from ``(set, probability)`` pairs, merging
    duplicate sets and dropping zero probabilities.
    """
    merged: Dict[_graph.VertexSet, Fraction] = collections.defaultdict(
        Fraction
    )
    for s, p in weighted_sets:
        merged[tuple(sorted(s))] += Fraction(p)
    support = sorted(s for s, p in merged.items() if p != 0)
    return StableSetDistribution(
        n=n,
        support=tuple(support),
        probabilities=tuple(merged[s] for s in support),
    )


def greedy_coloring(g: _graph.Graph) -> ProperColoring:
    """Colour vertices in reverse degeneracy order, each with the least colour
    absent among its already coloured neighbours. Uses at most
    ``degeneracy + 1`` colours.
    """
    order, _ = _graph.degeneracy_order(g)
    colors = [-1] * g.n
    for v in reversed(order):
        taken = {colors[u] for u in g.neighbors(v)}
        c = 0
        while c in taken:
            c += 1
        colors[v] = c
    return ProperColoring(colors=tuple(colors), k=max(colors, default=-1) + 1)


def chromatic_number_exact(
    g: _graph.Graph, vertex_budget: int = DEFAULT_VERTEX_BUDGET
) -> Tuple[int, ProperColoring]:
    """Exact chromatic number by branch-and-bound.

    A maximum clique gives the lower bound and is precoloured; the greedy
    colouring gives the upper bound. The remaining vertices are branched on
    in order of decreasing degree, ties by lowest id, and a new colour is
    only ever opened as the next unused one.

    Raises:
        BudgetExceededError: If ``g`` has more than ``vertex_budget``
            vertices.
    """
    if g.n > vertex_budget:
        raise _exceptions.BudgetExceededError(
            f"exact colouring of {g.n} vertices", vertex_budget
        )
    best = greedy_coloring(g)
    if g.n == 0:
        return 0, best
    clique = _graph.max_clique(g)
    in_clique = set(clique)
    order = list(clique) + sorted(
        (v for v in g.vertices if v not in in_clique),
        key=lambda v: (-g.degree(v), v),
    )
    for k in range(len(clique), best.k):
        colors = _find_k_coloring(g, k, order, len(clique))
        if colors is not None:
            best = ProperColoring(colors=tuple(colors), k=k)
            break
    LOGGER.info(f"Chromatic number of {g} is {best.k}")
    return best.k, best


def _find_k_coloring(
    g: _graph.Graph, k: int, order: List[int], precoloured: int
) -> Optional[List[int]]:
    colors = [-1] * g.n
    for i in range(precoloured):
        colors[order[i]] = i

    def _extend(index: int, used: int) -> bool:
        if index == len(order):
            return True
        v = order[index]
        forbidden = {colors[u] for u in g.neighbors(v)}
        for c in range(min(used + 1, k)):
            if c in forbidden:
                continue
            colors[v] = c
            if _extend(index + 1, max(used, c + 1)):
                return True
        colors[v] = -1
        return False

    return colors if _extend(precoloured, precoloured) else None


def fractional_chromatic_exact(
    g: _graph.Graph, budget: int = _stable.DEFAULT_STABLE_SET_BUDGET
) -> FractionalColoring:
    """Exact fractional chromatic number.

    Solves the fractional clique LP ``max sum(y) s.t. y(S) <= 1`` for every
    maximal stable set ``S`` with the exact simplex method. Its dual solution
    is the optimal covering ``x_S``, and the optimal ``y`` is returned as the
    certificate.

    Raises:
        BudgetExceededError: If there are more than ``budget`` maximal stable
            sets.
    """
    if g.n == 0:
        return FractionalColoring(0, (), (), Fraction(0), ())
    sets = _stable.maximal_stable_sets(g, budget)
    rows = [[1 if v in s else 0 for v in g.vertices] for s in sets]
    solution = _simplex.maximize([1] * g.n, rows, [1] * len(sets))
    support, weights = [], []
    for s, x in zip(sets, solution.dual):
        if x > 0:
            support.append(s)
            weights.append(x)
    coloring = FractionalColoring(
        n=g.n,
        support=tuple(support),
        weights=tuple(weights),
        value=solution.value,
        clique_weights=tuple(solution.primal),
    )
    if sum(weights, Fraction(0)) != solution.value:
        raise _exceptions.LPError("primal and dual values differ")
    LOGGER.info(
        f"Fractional chromatic number of {g} is {coloring.value} "
        f"({len(sets)} maximal stable sets, {solution.pivots} pivots)"
    )
    return coloring


def verify_duality(
    g: _graph.Graph,
    f: FractionalColoring,
    budget: int = _stable.DEFAULT_STABLE_SET_BUDGET,
) -> DualityCheck:
    """Check that ``f`` is a feasible covering, that its fractional clique is
    feasible against every maximal stable set, and that both have the same
    value. Together these certify optimality.
    """
    failures = []
    try:
        f.check(g)
    except _exceptions.SepchooseError as exc:
        failures.append(str(exc))
    y = f.clique_weights
    if any(w < 0 for w in y):
        failures.append("negative clique weight")
    for s in _stable.maximal_stable_sets(g, budget):
        load = sum((y[v] for v in s), Fraction(0))
        if load > 1:
            failures.append(f"clique weight {load} on stable set {list(s)}")
    dual_value = sum(y, Fraction(0))
    if dual_value != f.value:
        failures.append(f"values differ: {f.value} != {dual_value}")
    return DualityCheck(
        ok=not failures,
        primal_value=f.value,
        dual_value=dual_value,
        failures=failures,
    )


def coloring_to_distribution(c: ProperColoring) -> StableSetDistribution:
    """Uniform distribution over the colour classes of ``c``."""
    p = Fraction(1, c.k)
    return make_distribution(len(c.colors), [(s, p) for s in c.classes()])


def fractional_to_distribution(
    f: FractionalColoring,
) -> StableSetDistribution:
    """Turn a fractional colouring of value ``k`` into a distribution with
    every marginal exactly ``1/k``.

    Sets get probability ``x_S / k``. Then, in increasing vertex order, each
    vertex ``v`` with marginal ``m > 1/k`` is kept with probability
    ``(1/k) / m``: every support set containing ``v`` is split into itself
    and itself without ``v``.
    """
    if f.n == 0:
        return StableSetDistribution(0, ((),), (Fraction(1),))
    target = 1 / f.value
    current = [(s, w / f.value) for s, w in zip(f.support, f.weights)]
    for v in range(f.n):
        marginal = sum((p for s, p in current if v in s), Fraction(0))
        if marginal <= target:
            continue
        keep = target / marginal
        split = []
        for s, p in current:
            if v in s:
                split.append((s, p * keep))
                split.append((tuple(u for u in s if u != v), p * (1 - keep)))
            else:
                split.append((s, p))
        merged = make_distribution(f.n, split)
        current = list(zip(merged.support, merged.probabilities))
    return make_distribution(f.n, current)
