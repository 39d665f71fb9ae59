"""List colouring, separation choosability and adapted colourings.

.. module:: _choosability
    :synopsis: Backtracking list colouring, an exact separation choosability
        decider over canonical list assignments, the edge labelling that
        reduces adapted colouring to proper list colouring, and a randomized
        search for bad assignments.

Canonical assignments: lists are assigned in vertex order. When the list of
vertex ``v`` is chosen, two colours that occur in exactly the same earlier
lists are interchangeable, and so are all colours not used yet. The list of
``v`` is therefore determined, up to renaming colours, by how many colours it
takes from each such class. From each class the lowest ids are taken and
fresh colours get the next unused ids. Every assignment is a colour renaming
of exactly one canonical assignment reached this way, and at most ``k n``
colours are ever used.
"""
import collections
import dataclasses
import enum
import itertools
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

import daiquiri

from repobee_sepchoose import _exceptions, _graph, _rng

LOGGER = daiquiri.getLogger(__file__)

DEFAULT_ASSIGNMENT_BUDGET = 10 ** 8
DEFAULT_TRIALS = 1000

ColorList = Tuple[int, ...]

ListColoring = collections.namedtuple("ListColoring", "colorable coloring")
ListColoring.__doc__ = """Outcome of a list colouring search. ``coloring`` is
the per-vertex colour tuple when ``colorable``, otherwise None.
"""

AdaptReport = collections.namedtuple(
    "AdaptReport", "assignments colorings violations"
)


class SepStatus(enum.Enum):
    CHOOSABLE = "choosable"
    NOT_CHOOSABLE = "not_choosable"
    UNKNOWN = "unknown"


@dataclasses.dataclass(frozen=True)
class ListAssignment:
    """``lists[v]`` is the sorted colour list of vertex ``v``; all lists
    have exactly ``k`` colours.
    """

    lists: Tuple[ColorList, ...]
    k: int

    def __post_init__(self):
        lists = tuple(tuple(sorted(lst)) for lst in self.lists)
        object.__setattr__(self, "lists", lists)
        for v, lst in enumerate(lists):
            if len(set(lst)) != self.k or len(lst) != self.k:
                raise _exceptions.ParameterError(
                    f"list of vertex {v} must hold {self.k} distinct colours"
                    f", got {list(lst)}"
                )
            if lst and lst[0] < 0:
                raise _exceptions.ParameterError(
                    f"colours must be nonnegative, vertex {v} has {lst[0]}"
                )

    @classmethod
    def from_lists(cls, lists: Sequence[Sequence[int]]) -> "ListAssignment":
        k = len(lists[0]) if lists else 0
        return cls(lists=tuple(tuple(lst) for lst in lists), k=k)

    def max_color(self) -> int:
        return max((c for lst in self.lists for c in lst), default=-1)

    def to_dict(self) -> Dict[str, List[int]]:
        return {str(v): list(lst) for v, lst in enumerate(self.lists)}


@dataclasses.dataclass(frozen=True)
class EdgeLabeling:
    """``labels[i]`` is the colour label of ``g.edges[i]``."""

    labels: Tuple[int, ...]


SepDecision = collections.namedtuple(
    "SepDecision", "status witness assignments_checked"
)


def _check_cover(g: _graph.Graph, lists: ListAssignment) -> None:
    if len(lists.lists) != g.n:
        raise _exceptions.MissingListError(
            f"{len(lists.lists)} lists given for {g.n} vertices"
        )


def has_max_separation(g: _graph.Graph, lists: ListAssignment) -> bool:
    """True iff the lists of adjacent vertices share at most one colour."""
    _check_cover(g, lists)
    sets = [set(lst) for lst in lists.lists]
    return all(len(sets[u] & sets[v]) <= 1 for u, v in g.edges)


def is_l_colorable(g: _graph.Graph, lists: ListAssignment) -> ListColoring:
    """Backtracking search for a proper colouring with ``c(v)`` in
    ``L(v)``, always branching on the uncoloured vertex with the fewest
    remaining options (lowest id on ties).
    """
    _check_cover(g, lists)
    return _search_coloring(g, lists, lambda u, v, cu, cv: cu == cv)


def is_adapted_colorable(
    g: _graph.Graph, lists: ListAssignment, labeling: EdgeLabeling
) -> ListColoring:
    """Search for an L-colouring adapted to ``labeling``: no edge ``uv`` has
    ``c(u) == c(v) == label(uv)``.
    """
    _check_cover(g, lists)
    label = dict(zip(g.edges, labeling.labels))
    return _search_coloring(
        g,
        lists,
        lambda u, v, cu, cv: cu == cv == label[(min(u, v), max(u, v))],
    )


def _search_coloring(g: _graph.Graph, lists: ListAssignment, conflict):
    colors: List[Optional[int]] = [None] * g.n

    def _options(v: int) -> List[int]:
        return [
            c
            for c in lists.lists[v]
            if not any(
                colors[u] is not None and conflict(v, u, c, colors[u])
                for u in g.neighbors(v)
            )
        ]

    def _extend(remaining: int) -> bool:
        if remaining == 0:
            return True
        v, options = min(
            ((v, _options(v)) for v in g.vertices if colors[v] is None),
            key=lambda item: (len(item[1]), item[0]),
        )
        for c in options:
            colors[v] = c
            if _extend(remaining - 1):
                return True
        colors[v] = None
        return False

    if _extend(g.n):
        return ListColoring(True, tuple(colors))
    return ListColoring(False, None)


def adapted_colorings(
    g: _graph.Graph, lists: ListAssignment, labeling: EdgeLabeling
) -> Iterator[Tuple[int, ...]]:
    """Every L-colouring adapted to ``labeling``, in lexicographic order."""
    _check_cover(g, lists)
    label = dict(zip(g.edges, labeling.labels))
    colors: List[int] = []

    def _extend(v: int) -> Iterator[Tuple[int, ...]]:
        if v == g.n:
            yield tuple(colors)
            return
        for c in lists.lists[v]:
            if any(
                colors[u] == c == label[(u, v)]
                for u in g.neighbors(v)
                if u < v
            ):
                continue
            colors.append(c)
            yield from _extend(v + 1)
            colors.pop()

    return _extend(0)


def labeling_from_lists(
    g: _graph.Graph, lists: ListAssignment
) -> EdgeLabeling:
    """Label every edge with the colour its endpoint lists share, or with a
    sentinel colour that is in no list when they share none.

    Raises:
        SeparationError: If some edge's lists share more than one colour.
    """
    _check_cover(g, lists)
    sentinel = lists.max_color() + 1
    labels = []
    for u, v in g.edges:
        shared = set(lists.lists[u]) & set(lists.lists[v])
        if len(shared) > 1:
            raise _exceptions.SeparationError(
                f"lists of edge ({u}, {v}) share {sorted(shared)}"
            )
        labels.append(shared.pop() if shared else sentinel)
    return EdgeLabeling(labels=tuple(labels))


def canonical_assignments(
    g: _graph.Graph, k: int
) -> Iterator[ListAssignment]:
    """All canonical k-list assignments of ``g`` with maximum separation,
    in lexicographic order of the list sequence.
    """
    if k < 1:
        raise _exceptions.ParameterError(f"k must be >= 1: {k}")
    assigned: List[ColorList] = []

    def _candidates(v: int) -> List[ColorList]:
        classes: Dict[Tuple[int, ...], List[int]] = collections.defaultdict(
            list
        )
        used = max((c for lst in assigned for c in lst), default=-1) + 1
        for c in range(used):
            signature = tuple(u for u, lst in enumerate(assigned) if c in lst)
            classes[signature].append(c)
        groups = list(classes.items())
        earlier = [u for u in g.neighbors(v) if u < v]
        candidates = []
        ranges = [range(min(len(cs), k) + 1) for _, cs in groups]
        for counts in itertools.product(*ranges):
            taken = sum(counts)
            if taken > k:
                continue
            if any(
                sum(c for (sig, _), c in zip(groups, counts) if u in sig) > 1
                for u in earlier
            ):
                continue
            chosen = [
                color
                for (_, cs), count in zip(groups, counts)
                for color in cs[:count]
            ]
            chosen += list(range(used, used + k - taken))
            candidates.append(tuple(sorted(chosen)))
        return sorted(candidates)

    def _extend(v: int) -> Iterator[ListAssignment]:
        if v == g.n:
            yield ListAssignment(lists=tuple(assigned), k=k)
            return
        for candidate in _candidates(v):
            assigned.append(candidate)
            yield from _extend(v + 1)
            assigned.pop()

    return _extend(0)


def decide_sep_choosable(
    g: _graph.Graph, k: int, budget: int = DEFAULT_ASSIGNMENT_BUDGET
) -> SepDecision:
    """Decide separation k-choosability by testing every canonical
    assignment with maximum separation for L-colourability.

    Returns:
        A SepDecision. ``NOT_CHOOSABLE`` carries the first non-colourable
        assignment in canonical order, and ``UNKNOWN`` means the budget ran
        out first.
    """
    checked = 0
    for lists in canonical_assignments(g, k):
        if checked >= budget:
            LOGGER.warning(
                f"Assignment budget of {budget} exhausted for k = {k}"
            )
            return SepDecision(SepStatus.UNKNOWN, None, checked)
        checked += 1
        if not is_l_colorable(g, lists).colorable:
            LOGGER.info(
                f"Bad {k}-assignment found after {checked} assignments"
            )
            return SepDecision(SepStatus.NOT_CHOOSABLE, lists, checked)
    LOGGER.info(f"{g} is separation {k}-choosable ({checked} assignments)")
    return SepDecision(SepStatus.CHOOSABLE, None, checked)


def raw_bad_assignment(
    g: _graph.Graph, k: int, universe: int
) -> Optional[ListAssignment]:
    """First bad assignment in plain enumeration of all max-separation
    k-list assignments over colours ``0..universe-1``, with no symmetry
    reduction. Colourability is decided by scanning every choice of one
    colour per list, so this is only meant for tiny graphs.
    """
    subsets = list(itertools.combinations(range(universe), k))
    assigned: List[ColorList] = []

    def _colorable() -> bool:
        return any(
            all(colors[u] != colors[v] for u, v in g.edges)
            for colors in itertools.product(*assigned)
        )

    def _extend(v: int) -> Optional[ListAssignment]:
        if v == g.n:
            if _colorable():
                return None
            return ListAssignment(lists=tuple(assigned), k=k)
        for subset in subsets:
            if any(
                len(set(subset) & set(assigned[u])) > 1
                for u in g.neighbors(v)
                if u < v
            ):
                continue
            assigned.append(subset)
            found = _extend(v + 1)
            assigned.pop()
            if found is not None:
                return found
        return None

    return _extend(0)


def verify_adapt_reduction(
    g: _graph.Graph, k: int, budget: int = DEFAULT_ASSIGNMENT_BUDGET
) -> AdaptReport:
    """For every canonical max-separation assignment, check that every
    colouring adapted to the labelling built from the lists is proper.
    """
    assignments = colorings = 0
    violations = []
    for lists in canonical_assignments(g, k):
        if assignments >= budget:
            raise _exceptions.BudgetExceededError(
                "adapted colouring check", budget
            )
        assignments += 1
        labeling = labeling_from_lists(g, lists)
        for coloring in adapted_colorings(g, lists, labeling):
            colorings += 1
            if any(coloring[u] == coloring[v] for u, v in g.edges):
                violations.append((lists, coloring))
    return AdaptReport(
        assignments=assignments, colorings=colorings, violations=violations
    )


def search_bad_assignment(
    g: _graph.Graph, k: int, trials: int = DEFAULT_TRIALS, seed: int = 0
) -> Optional[ListAssignment]:
    """Randomized two-stage search for a max-separation assignment with no
    L-colouring.

    A side ``A`` is fixed first: one colour class of a bipartite graph, or a
    random maximal stable set otherwise. Vertices of ``A`` get random lists
    from a palette of ``2k`` colours. Every other vertex then greedily takes
    the colours most frequent among its neighbours' lists, as long as
    separation with those neighbours allows, padded with fresh colours.
    Assignments violating separation elsewhere are rejected.

    Returns:
        A verified bad assignment, or None if no trial produced one.
    """
    if k < 1:
        raise _exceptions.ParameterError(f"k must be >= 1: {k}")
    rng = _rng.make_rng(seed)
    check = _graph.is_bipartite(g)
    palette = 2 * k
    for trial in range(trials):
        if check.is_bipartite:
            side = {v for v in g.vertices if check.coloring[v] == 0}
        else:
            side = _random_stable_side(g, rng)
        lists = _two_stage_lists(g, k, side, palette, rng)
        if not has_max_separation(g, lists):
            continue
        if not is_l_colorable(g, lists).colorable:
            LOGGER.info(f"Bad {k}-assignment found in trial {trial}")
            return lists
    return None


def _random_stable_side(g: _graph.Graph, rng) -> set:
    side: set = set()
    for v in rng.permutation(g.n):
        v = int(v)
        if not g.neighbors(v) & side:
            side.add(v)
    return side


def _two_stage_lists(
    g: _graph.Graph, k: int, side: set, palette: int, rng
) -> ListAssignment:
    lists: List[Optional[ColorList]] = [None] * g.n
    for v in sorted(side):
        lists[v] = tuple(
            sorted(int(c) for c in rng.choice(palette, size=k, replace=False))
        )
    fresh = palette
    for v in g.vertices:
        if lists[v] is not None:
            continue
        fixed = [set(lists[u]) for u in g.neighbors(v) if lists[u]]
        frequency = collections.Counter(c for lst in fixed for c in lst)
        ranked = sorted(frequency, key=lambda c: (-frequency[c], c))
        chosen: List[int] = []
        for c in ranked:
            if len(chosen) == k:
                break
            if all(len(lst & set(chosen + [c])) <= 1 for lst in fixed):
                chosen.append(c)
        while len(chosen) < k:
            chosen.append(fresh)
            fresh += 1
        lists[v] = tuple(sorted(chosen))
    return ListAssignment(lists=tuple(lists), k=k)
