"""Exact property suites over the small-graph catalog.

.. module:: _suites
    :synopsis: Each suite re-checks one family of guarantees (extraction
        bounds, expectation inequalities, reductions, choosability ground
        truths, generator contracts) and reports its failures.
"""
import collections
import dataclasses
from fractions import Fraction
from typing import Callable, Dict, List, Sequence

import daiquiri

from repobee_sepchoose import (
    _catalog,
    _choosability,
    _coloring,
    _exceptions,
    _extract,
    _format,
    _generators,
    _graph,
    _rng,
    _stable,
)

LOGGER = daiquiri.getLogger(__file__)

SuiteReport = collections.namedtuple("SuiteReport", "name checked failures")


@dataclasses.dataclass(frozen=True)
class SuiteConfig:
    """Sizes of the corpora the suites run on."""

    max_vertices: int = _catalog.CATALOG_MAX_VERTICES
    sample_count: int = 0
    seed: int = 0
    dominance_vertices: int = 10
    dominance_sample_count: int = _catalog.DEFAULT_SAMPLE_COUNT
    appendix_d_max: int = 10 ** 4
    appendix_k_cap: int = 60
    reduction_instances: int = 1000
    adapt_vertices: int = 5
    generator_n: int = 10 ** 4
    generator_seeds: int = 20
    generator_D: float = 0.5
    window_share: float = 0.8


class _Collector:
    def __init__(self, suite: str):
        self.suite = suite
        self.checked = 0
        self.failures: List[_format.Failure] = []

    def check(self, ok: bool, item, msg: str) -> None:
        self.checked += 1
        if not ok:
            self.failures.append(_format.Failure(self.suite, item, msg))

    def report(self) -> SuiteReport:
        LOGGER.info(
            f"Suite {self.suite}: {self.checked} checks, "
            f"{len(self.failures)} failures"
        )
        return SuiteReport(self.suite, self.checked, self.failures)


def _label(g: _graph.Graph) -> str:
    return f"n={g.n} edges={list(g.edges)}"


def fractional_suite(graphs: Sequence[_graph.Graph]) -> SuiteReport:
    """Extraction from the flattened optimal fractional colouring reaches
    average degree ``d / chi_f``, and the LP optimum is certified by duality
    and bounded by the chromatic number.
    """
    out = _Collector("fractional")
    for g in graphs:
        f = _coloring.fractional_chromatic_exact(g)
        duality = _coloring.verify_duality(g, f)
        out.check(duality.ok, _label(g), "; ".join(duality.failures))
        dist = _coloring.fractional_to_distribution(f)
        out.check(
            set(dist.marginals) <= {1 / f.value},
            _label(g),
            "flattened marginals are not 1/chi_f",
        )
        witness = _extract.extract_from_distribution(g, dist)
        bound = g.avg_degree() / f.value
        out.check(
            witness.verify(g) and witness.avg_degree >= bound,
            _label(g),
            f"average degree {witness.avg_degree} below {bound}",
        )
        if g.n <= _coloring.DEFAULT_VERTEX_BUDGET:
            chi, _ = _coloring.chromatic_number_exact(g)
            out.check(f.value <= chi, _label(g), f"chi_f {f.value} > {chi}")
    return out.report()


def integral_suite(graphs: Sequence[_graph.Graph]) -> SuiteReport:
    """Extraction from an optimal colouring reaches minimum degree
    ``delta / 2 chi``; greedy colouring stays within degeneracy + 1.
    """
    out = _Collector("integral")
    for g in graphs:
        chi, coloring = _coloring.chromatic_number_exact(g)
        witness = _extract.extract_from_coloring(g, coloring)
        bound = Fraction(g.min_degree(), 2 * chi)
        out.check(
            witness.verify(g) and witness.min_degree >= bound,
            _label(g),
            f"minimum degree {witness.min_degree} below {bound}",
        )
        _, degeneracy = _graph.degeneracy_order(g)
        greedy = _coloring.greedy_coloring(g)
        out.check(
            greedy.k <= degeneracy + 1,
            _label(g),
            f"greedy used {greedy.k} colours, degeneracy is {degeneracy}",
        )
    return out.report()


def lemma_suite(graphs: Sequence[_graph.Graph]) -> SuiteReport:
    """The uniform stable set has expected degree sum at least
    ``sum(ln d(v)) / 4``, the ``X_v`` statistics sum to twice that
    expectation, and on triangle-free graphs the conditional counts are
    ``2^k + 1``.
    """
    out = _Collector("lemma")
    for g in graphs:
        if g.min_degree() < 1:
            continue
        family = _stable.enumerate_stable_sets(g)
        expected = _stable.expected_degree_sum(g, family)
        rhs = sum(_stable.ln_bounds(d)[1] for d in g.degrees()) / 4
        out.check(
            expected >= rhs,
            _label(g),
            f"expected degree sum {expected} below {float(rhs):.6f}",
        )
        x_total = sum(_stable.expected_x_statistics(g, family), Fraction(0))
        out.check(
            x_total == 2 * expected,
            _label(g),
            f"sum of E(X_v) is {x_total}, expected {2 * expected}",
        )
        if not _graph.list_triangles(g):
            mismatches = _stable.conditional_count_mismatches(g, family)
            out.check(
                not mismatches,
                _label(g),
                f"conditional counts differ: {mismatches[:3]}",
            )
    return out.report()


def semi_suite(graphs: Sequence[_graph.Graph]) -> SuiteReport:
    """The exact semi-bipartite optimum is at least ``ln(delta) / 2``."""
    out = _Collector("semi")
    for g in graphs:
        if g.min_degree() < 1:
            continue
        witness = _extract.best_semi_bipartite(g, _extract.SemiMode.EXACT)
        bound = _stable.ln_bounds(g.min_degree())[1] / 2
        out.check(
            witness.verify(g) and witness.avg_degree >= bound,
            _label(g),
            f"semi-bipartite density {witness.avg_degree} below "
            f"{float(bound):.6f}",
        )
    return out.report()


def appendix_suite(config: SuiteConfig) -> SuiteReport:
    out = _Collector("appendix")
    report = _stable.verify_appendix_inequality(
        config.appendix_d_max, config.appendix_k_cap
    )
    out.check(
        not report.violations,
        f"d<={report.d_max} k<={report.k_cap}",
        f"violations: {report.violations[:3]}",
    )
    minimum = _stable.appendix_minimum()
    out.check(
        9.0 <= minimum.x <= 10.5 and 0.25 <= minimum.value <= 0.35,
        "auxiliary minimum",
        f"minimum {minimum.value:.4f} at x = {minimum.x:.4f}",
    )
    return out.report()


def reduction_suite(config: SuiteConfig) -> SuiteReport:
    """Trimming the larger side of random bipartite graphs keeps at least
    half the average degree.
    """
    out = _Collector("reduction")
    rng = _rng.make_rng(config.seed)
    for instance in range(config.reduction_instances):
        size_a = int(rng.integers(1, 13))
        size_b = int(rng.integers(1, size_a + 1))
        p = float(rng.random())
        edges = [
            (u, size_a + v)
            for u in range(size_a)
            for v in range(size_b)
            if rng.random() < p
        ]
        g = _graph.Graph(size_a + size_b, edges)
        a = range(size_a)
        b = range(size_a, size_a + size_b)
        result = _extract.trim_equal_parts(g, a, b)
        out.check(
            result.certified and result.after * 2 >= result.before,
            f"instance {instance}",
            f"trimmed density {result.after} < half of {result.before}",
        )
    return out.report()


def adapt_suite(config: SuiteConfig, k: int = 2) -> SuiteReport:
    """Every colouring adapted to the labelling built from max-separation
    lists is a proper list colouring.
    """
    out = _Collector("adapt")
    graphs = _catalog.atlas_graphs(config.adapt_vertices, connected_only=False)
    for g in graphs:
        report = _choosability.verify_adapt_reduction(g, k)
        out.check(
            not report.violations,
            _label(g),
            f"{len(report.violations)} adapted colourings are improper",
        )
    return out.report()


SEP_TRUTHS = [
    ("c4", lambda: _generators.cycle(4), 1, False),
    ("c4", lambda: _generators.cycle(4), 2, True),
    ("k3", lambda: _generators.complete_graph(3), 1, False),
    ("k3", lambda: _generators.complete_graph(3), 2, True),
]


def sep_truths_suite(config: SuiteConfig) -> SuiteReport:
    """Known separation choosability values, cross-checked against plain
    enumeration over ``2n`` colours.
    """
    out = _Collector("sep-truths")
    for name, build, k, expected in SEP_TRUTHS:
        g = build()
        decision = _choosability.decide_sep_choosable(g, k)
        choosable = decision.status == _choosability.SepStatus.CHOOSABLE
        out.check(
            choosable == expected,
            f"{name}, k={k}",
            f"decided {decision.status.value}",
        )
        if decision.witness is not None:
            out.check(
                _choosability.has_max_separation(g, decision.witness)
                and not _choosability.is_l_colorable(
                    g, decision.witness
                ).colorable,
                f"{name}, k={k}",
                "witness does not re-verify",
            )
        raw = _choosability.raw_bad_assignment(g, k, 2 * g.n)
        out.check(
            (raw is None) == choosable,
            f"{name}, k={k}",
            "plain enumeration disagrees",
        )
    return out.report()


def generators_suite(config: SuiteConfig) -> SuiteReport:
    """Triangle-free construction contracts over ``generator_seeds`` seeds:
    always triangle-free, mostly inside the degree window, and the initial
    triangle count within ``D^3 n / 3`` for at least half the seeds.
    """
    out = _Collector("generators")
    within_bound = 0
    for seed in range(config.generator_seeds):
        g, stats = _generators.triangle_free_construction(
            config.generator_n, config.generator_D, seed
        )
        out.check(
            not _graph.list_triangles(g), f"seed {seed}", "has triangles"
        )
        out.check(
            stats.window_fraction >= config.window_share,
            f"seed {seed}",
            f"only {stats.window_fraction:.3f} of vertices in the window",
        )
        within_bound += stats.triangles_within_bound
    out.check(
        2 * within_bound >= config.generator_seeds,
        "triangle bound",
        f"only {within_bound} seeds within the bound",
    )
    return out.report()


def dominance_suite(graphs: Sequence[_graph.Graph]) -> SuiteReport:
    """The brute-force optimum dominates every bipartite extraction."""
    out = _Collector("dominance")
    for g in graphs:
        optimum = _extract.max_bip_induced_oracle(g).avg_degree
        f = _coloring.fractional_chromatic_exact(g)
        _, coloring = _coloring.chromatic_number_exact(g)
        cover = _extract.aks_peeling_coloring(g, 0)
        witnesses = {
            "fractional": _extract.extract_from_distribution(
                g, _coloring.fractional_to_distribution(f)
            ),
            "coloring": _extract.extract_from_coloring(g, coloring),
            "greedy": _extract.extract_from_coloring(
                g, _coloring.greedy_coloring(g)
            ),
            "peeling": _extract.extract_from_cover(g, cover),
        }
        for method, witness in witnesses.items():
            out.check(
                witness.avg_degree <= optimum,
                _label(g),
                f"{method} density {witness.avg_degree} beats the optimum "
                f"{optimum}",
            )
    return out.report()


def _corpus(config: SuiteConfig) -> List[_graph.Graph]:
    return _catalog.catalog(
        config.max_vertices, sample_count=config.sample_count, seed=config.seed
    )


def dominance_corpus(config: SuiteConfig) -> List[_graph.Graph]:
    """The corpus up to ``dominance_vertices``, extended by
    ``dominance_sample_count`` sampled graphs for every larger size up to
    ``dominance_vertices``.
    """
    graphs = [g for g in _corpus(config) if g.n <= config.dominance_vertices]
    largest = max((g.n for g in graphs), default=config.max_vertices)
    for n in range(largest + 1, config.dominance_vertices + 1):
        graphs += _catalog.random_connected_sample(
            n, config.dominance_sample_count, config.seed
        )
    return graphs


SUITES: Dict[str, Callable[[SuiteConfig], SuiteReport]] = {
    "fractional": lambda c: fractional_suite(_corpus(c)),
    "integral": lambda c: integral_suite(_corpus(c)),
    "lemma": lambda c: lemma_suite(_corpus(c)),
    "semi": lambda c: semi_suite(_corpus(c)),
    "appendix": appendix_suite,
    "reduction": reduction_suite,
    "adapt": adapt_suite,
    "sep-truths": sep_truths_suite,
    "generators": generators_suite,
    "dominance": lambda c: dominance_suite(dominance_corpus(c)),
}


def run_suites(
    names: Sequence[str], config: SuiteConfig = SuiteConfig()
) -> List[SuiteReport]:
    """Run the named suites in the given order.

    Raises:
        ParameterError: If a name is not a known suite.
    """
    unknown = [name for name in names if name not in SUITES]
    if unknown:
        raise _exceptions.ParameterError(
            f"unknown suite(s) {unknown}, known: {', '.join(SUITES)}"
        )
    return [SUITES[name](config) for name in names]
