"""Stable-set enumeration, uniform sampling and expectation machinery.

.. module:: _stable
    :synopsis: Exact stable-set families, the degree-sum expectation under
        the uniform distribution, the conditional expectation inequality and
        certified logarithm bounds.
"""
import collections
import dataclasses
import math
from decimal import Decimal, localcontext
from fractions import Fraction
from typing import Dict, Iterator, List, Optional, Tuple, Union

import daiquiri
import numpy as np

from repobee_sepchoose import _exceptions, _graph, _rng

LOGGER = daiquiri.getLogger(__file__)

DEFAULT_STABLE_SET_BUDGET = 2 ** 20
DEFAULT_SEARCH_BUDGET = 10 ** 7
LN_PRECISION = Fraction(1, 10 ** 9)

AppendixReport = collections.namedtuple(
    "AppendixReport",
    "d_max k_cap checked violations min_slack min_location",
)
AppendixMinimum = collections.namedtuple("AppendixMinimum", "x value")


@dataclasses.dataclass(frozen=True)
class StableSetFamily:
    """Every stable set of a graph, the empty set included, in lexicographic
    order of the sorted vertex tuples.
    """

    graph: _graph.Graph
    all_sets: Tuple[_graph.VertexSet, ...]

    @property
    def count(self) -> int:
        return len(self.all_sets)

    def membership_counts(self) -> List[int]:
        """For each vertex, the number of sets in the family containing it."""
        counts = [0] * self.graph.n
        for s in self.all_sets:
            for v in s:
                counts[v] += 1
        return counts


def _stable_masks(g: _graph.Graph, budget: int) -> Iterator[int]:
    """Depth-first generation of all stable sets as bitmasks. Children extend
    a set by a larger vertex, so the preorder is lexicographic.
    """
    masks = g.adjacency_masks()
    count = 0
    stack = [(0, 0, 0)]  # (set, blocked vertices, next candidate)
    while stack:
        current, blocked, start = stack.pop()
        count += 1
        if count > budget:
            raise _exceptions.BudgetExceededError(
                "stable set enumeration", budget
            )
        yield current
        children = []
        for v in range(start, g.n):
            if not (blocked >> v) & 1:
                children.append(
                    (current | (1 << v), blocked | masks[v], v + 1)
                )
        stack.extend(reversed(children))


def enumerate_stable_sets(
    g: _graph.Graph, budget: int = DEFAULT_STABLE_SET_BUDGET
) -> StableSetFamily:
    """Enumerate all stable sets of ``g`` including the empty set.

    Raises:
        BudgetExceededError: If there are more than ``budget`` stable sets.
    """
    sets = tuple(_graph._mask_to_set(m) for m in _stable_masks(g, budget))
    LOGGER.info(f"Enumerated {len(sets)} stable sets of {g}")
    return StableSetFamily(graph=g, all_sets=sets)


def maximal_stable_sets(
    g: _graph.Graph, budget: int = DEFAULT_STABLE_SET_BUDGET
) -> List[_graph.VertexSet]:
    """All maximal stable sets, by Bron-Kerbosch with pivoting on the
    complement graph, sorted lexicographically.
    """
    full = (1 << g.n) - 1
    non_adjacent = [
        full & ~mask & ~(1 << v) for v, mask in enumerate(g.adjacency_masks())
    ]
    found = []

    def _expand(r: int, p: int, x: int):
        if not p and not x:
            found.append(r)
            if len(found) > budget:
                raise _exceptions.BudgetExceededError(
                    "maximal stable set enumeration", budget
                )
            return
        pivot = _graph._lowest_bit(p | x)
        for v in _graph._mask_to_set(p & ~non_adjacent[pivot]):
            bit = 1 << v
            _expand(r | bit, p & non_adjacent[v], x & non_adjacent[v])
            p &= ~bit
            x |= bit

    if g.n == 0:
        return [()]
    _expand(0, full, 0)
    return sorted(_graph._mask_to_set(m) for m in found)


def uniform_stable_set(
    g: _graph.Graph, seed: int, budget: int = DEFAULT_STABLE_SET_BUDGET
) -> _graph.VertexSet:
    """Draw a stable set uniformly from all stable sets of ``g``.

    There is no approximate fallback: when the family exceeds the budget this
    raises instead of silently sampling from another distribution.
    """
    family = enumerate_stable_sets(g, budget)
    return sample_uniform(family, _rng.make_rng(seed))


def sample_uniform(
    family: StableSetFamily, rng: np.random.Generator
) -> _graph.VertexSet:
    return family.all_sets[int(rng.integers(family.count))]


def expected_degree_sum(
    g: _graph.Graph,
    family: Optional[StableSetFamily] = None,
    budget: int = DEFAULT_STABLE_SET_BUDGET,
) -> Fraction:
    """Exact ``E(sum of d(v) over v in S)`` for a uniform stable set ``S``."""
    family = family or enumerate_stable_sets(g, budget)
    counts = family.membership_counts()
    total = sum(g.degree(v) * counts[v] for v in g.vertices)
    return Fraction(total, family.count)


def x_statistic(g: _graph.Graph, v: int, s: _graph.VertexSet) -> Fraction:
    """``X_v = d(v) |{v} & S| + |N(v) & S|`` for a stable set ``S``."""
    if not g.is_stable(s):
        raise _exceptions.NotStableError(f"{list(s)} is not a stable set")
    members = set(s)
    own = g.degree(v) if v in members else 0
    return Fraction(own + len(g.neighbors(v) & members))


def expected_x_statistics(
    g: _graph.Graph,
    family: Optional[StableSetFamily] = None,
    budget: int = DEFAULT_STABLE_SET_BUDGET,
) -> List[Fraction]:
    """``E(X_v)`` for every vertex ``v`` under the uniform distribution."""
    family = family or enumerate_stable_sets(g, budget)
    counts = family.membership_counts()
    return [
        Fraction(
            g.degree(v) * counts[v]
            + sum(counts[u] for u in g.neighbors(v)),
            family.count,
        )
        for v in g.vertices
    ]


def marginals_of_uniform(
    g: _graph.Graph,
    family: Optional[StableSetFamily] = None,
    budget: int = DEFAULT_STABLE_SET_BUDGET,
) -> List[Tuple[Fraction, Fraction]]:
    """For each vertex ``v``, ``(Pr(v in S), E|N(v) & S|)`` under the
    uniform distribution.
    """
    family = family or enumerate_stable_sets(g, budget)
    counts = family.membership_counts()
    return [
        (
            Fraction(counts[v], family.count),
            Fraction(sum(counts[u] for u in g.neighbors(v)), family.count),
        )
        for v in g.vertices
    ]


def conditional_expectation(d: int, k: int) -> Fraction:
    """``(d + k 2^(k-1)) / (2^k + 1)``: the expectation of ``X_v`` given the
    part of the stable set outside the closed neighborhood of ``v``, where
    ``k`` neighbors of ``v`` remain free.
    """
    if d < 1:
        raise _exceptions.ParameterError(f"d must be >= 1: {d}")
    if not 0 <= k <= d:
        raise _exceptions.ParameterError(f"k must be in 0..d, got k={k}")
    return (d + Fraction(k * 2 ** k, 2)) / (2 ** k + 1)


def conditional_count_mismatches(
    g: _graph.Graph,
    family: Optional[StableSetFamily] = None,
    budget: int = DEFAULT_STABLE_SET_BUDGET,
) -> List[Tuple[int, _graph.VertexSet, int, int]]:
    """Check that, for every vertex ``v`` and every stable set ``T`` of
    ``G - N[v]``, exactly ``2^k + 1`` stable sets ``S`` have
    ``S - N[v] = T``, where ``k`` counts the neighbors of ``v`` without a
    neighbor in ``T``. This holds in triangle-free graphs.

    Returns:
        ``(v, T, observed, expected)`` for every violation.
    """
    family = family or enumerate_stable_sets(g, budget)
    mismatches = []
    for v in g.vertices:
        closed = g.neighbors(v) | {v}
        classes: Dict[_graph.VertexSet, int] = collections.Counter(
            tuple(u for u in s if u not in closed) for s in family.all_sets
        )
        for t, observed in classes.items():
            covered = set().union(*(g.neighbors(u) for u in t))
            k = sum(1 for u in g.neighbors(v) if u not in covered)
            if observed != 2 ** k + 1:
                mismatches.append((v, t, observed, 2 ** k + 1))
    return mismatches


def ln_bounds(x: Union[int, Fraction]) -> Tuple[Fraction, Fraction]:
    """Rational ``(lo, hi)`` with ``lo <= ln x <= hi`` and
    ``hi - lo <= 3e-9``.

    The logarithm is evaluated with 50 significant digits by :py:mod:`decimal`
    and rounded outwards to a multiple of 1e-9, plus one extra unit on each
    side.
    """
    x = Fraction(x)
    if x <= 0:
        raise _exceptions.ParameterError(f"ln needs x > 0: {x}")
    if x == 1:
        return Fraction(0), Fraction(0)
    with localcontext() as ctx:
        ctx.prec = 50
        value = (Decimal(x.numerator) / Decimal(x.denominator)).ln()
    scaled = Fraction(value) / LN_PRECISION
    lo = (math.floor(scaled) - 1) * LN_PRECISION
    hi = (math.ceil(scaled) + 1) * LN_PRECISION
    return lo, hi


def verify_appendix_inequality(d_max: int, k_cap: int) -> AppendixReport:
    """Check ``(d + k 2^(k-1)) / (2^k + 1) >= ln(d) / 2`` for all integers
    ``1 <= d <= d_max`` and ``0 <= k <= min(d, k_cap)``.

    The right side uses the certified upper bound on ``ln d``, so every
    reported success is exact. Failures are reported, not raised.
    """
    violations = []
    min_slack = None
    min_location = None
    checked = 0
    for d in range(1, d_max + 1):
        rhs = ln_bounds(d)[1] / 2
        for k in range(min(d, k_cap) + 1):
            slack = conditional_expectation(d, k) - rhs
            checked += 1
            if min_slack is None or slack < min_slack:
                min_slack, min_location = slack, (d, k)
            if slack < 0:
                violations.append((d, k, slack))
    LOGGER.info(
        f"Checked {checked} (d, k) pairs, {len(violations)} violations, "
        f"minimum slack {float(min_slack or 0):.6f} at {min_location}"
    )
    return AppendixReport(
        d_max=d_max,
        k_cap=k_cap,
        checked=checked,
        violations=violations,
        min_slack=min_slack,
        min_location=min_location,
    )


def appendix_function(x: float) -> float:
    """``(1 - ln x / 2x) log2(2x / ln x - 1) - ln x`` for ``x > 1``."""
    ln_x = math.log(x)
    return (1 - ln_x / (2 * x)) * math.log2(2 * x / ln_x - 1) - ln_x


def appendix_minimum(
    low: float = 1.5, high: float = 100.0, tolerance: float = 1e-3
) -> AppendixMinimum:
    """Locate the minimum of :py:func:`appendix_function` by ternary
    search on ``[low, high]``.
    """
    while high - low > tolerance:
        left = low + (high - low) / 3
        right = high - (high - low) / 3
        if appendix_function(left) < appendix_function(right):
            high = right
        else:
            low = left
    x = (low + high) / 2
    return AppendixMinimum(x=x, value=appendix_function(x))


def max_stable_set(
    g: _graph.Graph, budget: int = DEFAULT_SEARCH_BUDGET
) -> _graph.VertexSet:
    """A maximum stable set, lexicographically smallest among the maximum
    ones, by branch and bound on the lowest undecided vertex.

    Raises:
        BudgetExceededError: If the search visits more than ``budget``
            nodes.
    """
    masks = g.adjacency_masks()
    best = [0, 0]
    nodes = [0]

    def _search(chosen: int, size: int, candidates: int):
        nodes[0] += 1
        if nodes[0] > budget:
            raise _exceptions.BudgetExceededError(
                "maximum stable set search", budget
            )
        if candidates == 0:
            if size > best[1]:
                best[0], best[1] = chosen, size
            return
        if size + _graph._popcount(candidates) <= best[1]:
            return
        v = _graph._lowest_bit(candidates)
        bit = 1 << v
        _search(chosen | bit, size + 1, candidates & ~bit & ~masks[v])
        if masks[v] & candidates:
            _search(chosen, size, candidates & ~bit)

    _search(0, 0, (1 << g.n) - 1)
    return _graph._mask_to_set(best[0])
