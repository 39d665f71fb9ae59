"""The plugin module for repobee-sepchoose.

.. module:: sepchoose
    :synopsis: A plugin for RepoBee that generates graphs, extracts dense
        bipartite induced subgraphs, decides separation choosability on small
        graphs and runs reproducible graph experiments.
"""
import enum
import math
import os
import pathlib
from fractions import Fraction
from typing import Any, Dict, Optional

import daiquiri

import repobee_plug as plug
from repobee_sepchoose import (
    _catalog,
    _choosability,
    _coloring,
    _exceptions,
    _experiments,
    _extract,
    _fileutils,
    _format,
    _generators,
    _graph,
    _stable,
    _suites,
)

LOGGER = daiquiri.getLogger(__file__)

sepchoose_category = plug.cli.category(
    "sepchoose",
    action_names=["gen", "color", "stable", "extract", "sep", "exp", "verify"],
    help="separation choosability and dense bipartite subgraph tools",
    description="generate graphs, extract certified bipartite induced "
    "subgraphs, decide separation choosability and run graph experiments",
)


class ColorMode(enum.Enum):
    GREEDY = "greedy"
    EXACT = "exact"
    FRACTIONAL = "fractional"


class StableTask(enum.Enum):
    ENUMERATE = "enumerate"
    EXPECTATION = "expectation"
    VERIFY_APPENDIX = "verify-appendix"


class ExtractMethod(enum.Enum):
    FRACTIONAL = "fractional"
    COLORING = "coloring"
    PEELING = "peeling"
    SEMI_EXACT = "semi-exact"
    SEMI_SAMPLED = "semi-sampled"
    SEMI_LOCAL = "semi-local"
    ORACLE = "oracle"


class SepMode(enum.Enum):
    EXACT = "exact"
    SEARCH = "search"


def _read_graph(path: pathlib.Path) -> _graph.Graph:
    return _fileutils.read_edge_list(path)


def _result(
    name: str,
    msg: str,
    payload: Dict[str, Any],
    out: Optional[pathlib.Path],
    status: plug.Status = plug.Status.SUCCESS,
) -> plug.Result:
    if out:
        _fileutils.write_json(payload, out)
        msg += f"\nWrote {out}"
    return plug.Result(name=name, msg=msg, status=status, data=payload)


def _error(name: str, exc: Exception) -> plug.Result:
    LOGGER.error(f"{name} failed: {exc}")
    return plug.Result(name=name, msg=str(exc), status=plug.Status.ERROR)


def _out_option():
    return plug.cli.option(
        short_name="-o",
        help="write the JSON result to this file",
        converter=pathlib.Path,
    )


class Gen(plug.Plugin, plug.cli.Command):
    """Extension command that generates a graph and writes it in edge-list
    format.
    """

    __settings__ = plug.cli.command_settings(
        help="generate a graph",
        description="generate a seeded random graph or a fixed graph and "
        "write it in edge-list format",
        action=sepchoose_category.gen,
    )
    outfile = plug.cli.positional(
        help="edge-list file to write", converter=pathlib.Path
    )
    kind = plug.cli.option(
        help="one of: " + ", ".join(k.value for k in _generators.GraphKind),
        converter=_generators.GraphKind,
        required=True,
    )
    n = plug.cli.option(help="number of vertices", converter=int, default=0)
    seed = plug.cli.option(help="64-bit seed", converter=int, default=0)
    p = plug.cli.option(help="edge probability (gnp)", converter=Fraction)
    D = plug.cli.option(
        help="density constant D of the triangle-free construction",
        converter=Fraction,
    )
    r = plug.cli.option(
        help="forbidden clique size r (kr_free)", converter=int
    )
    g = plug.cli.option(
        help="girth lower bound g (high_girth)", converter=int
    )
    c = plug.cli.option(
        help="constant c of the deletion constructions",
        converter=Fraction,
        default=_generators.DEFAULT_CONSTANT,
    )
    a = plug.cli.option(
        help="first part size (complete_bipartite)", converter=int
    )
    b = plug.cli.option(
        help="second part size (complete_bipartite)", converter=int
    )
    name = plug.cli.option(
        help="fixture name: " + ", ".join(sorted(_generators.NAMED_FIXTURES))
    )
    stats_json = plug.cli.option(
        help="write construction statistics as JSON to this file",
        converter=pathlib.Path,
    )

    def command(self) -> Optional[plug.Result]:
        try:
            spec = _generators.GenSpec(
                kind=self.kind,
                n=self.n,
                seed=self.seed,
                p=self.p,
                D=self.D,
                r=self.r,
                g=self.g,
                c=self.c,
                a=self.a,
                b=self.b,
                name=self.name,
            )
            graph, stats = _generators.generate(spec)
            _fileutils.write_edge_list(graph, self.outfile)
        except (_exceptions.SepchooseError, OSError) as exc:
            return _error("sepchoose-gen", exc)
        payload = {"n": graph.n, "edges": graph.num_edges, "stats": stats}
        return _result(
            "sepchoose-gen",
            f"Generated {spec.kind.value} graph with {graph.n} vertices and "
            f"{graph.num_edges} edges",
            payload,
            self.stats_json,
        )


class Color(plug.Plugin, plug.cli.Command):
    __settings__ = plug.cli.command_settings(
        help="colour a graph",
        description="greedy, exact or fractional colouring with exact "
        "rational output",
        action=sepchoose_category.color,
    )
    graph = plug.cli.positional(
        help="edge-list file of the graph", converter=pathlib.Path
    )
    mode = plug.cli.option(
        help="greedy, exact or fractional",
        converter=ColorMode,
        default=ColorMode.GREEDY,
    )
    vertex_budget = plug.cli.option(
        help="largest graph the exact colouring accepts",
        converter=int,
        default=_coloring.DEFAULT_VERTEX_BUDGET,
        configurable=True,
    )
    stable_set_budget = plug.cli.option(
        help="largest number of stable sets to enumerate",
        converter=int,
        default=_stable.DEFAULT_STABLE_SET_BUDGET,
        configurable=True,
    )
    out = _out_option()

    def command(self) -> Optional[plug.Result]:
        try:
            g = _read_graph(self.graph)
            payload = self._color(g)
        except (_exceptions.SepchooseError, OSError) as exc:
            return _error("sepchoose-color", exc)
        value = payload.get("value", payload.get("k"))
        return _result(
            "sepchoose-color",
            f"{self.mode.value} colouring of {g}: {value}",
            payload,
            self.out,
        )

    def _color(self, g: _graph.Graph) -> Dict[str, Any]:
        if self.mode == ColorMode.GREEDY:
            _, degeneracy = _graph.degeneracy_order(g)
            coloring = _coloring.greedy_coloring(g)
            return {
                **_format.coloring_to_dict(coloring),
                "degeneracy": degeneracy,
            }
        if self.mode == ColorMode.EXACT:
            _, coloring = _coloring.chromatic_number_exact(
                g, self.vertex_budget
            )
            return _format.coloring_to_dict(coloring)
        f = _coloring.fractional_chromatic_exact(g, self.stable_set_budget)
        check = _coloring.verify_duality(g, f, self.stable_set_budget)
        return {
            **_format.fractional_to_dict(f),
            "distribution": _format.distribution_to_dict(
                _coloring.fractional_to_distribution(f)
            ),
            "duality_verified": check.ok,
        }


class Stable(plug.Plugin, plug.cli.Command):
    __settings__ = plug.cli.command_settings(
        help="stable set enumeration and expectations",
        description="enumerate stable sets, compute exact expectations under "
        "the uniform stable set, or verify the conditional expectation "
        "inequality",
        action=sepchoose_category.stable,
    )
    task = plug.cli.positional(
        help="enumerate, expectation or verify-appendix", converter=StableTask
    )
    graph = plug.cli.option(
        short_name="-g",
        help="edge-list file of the graph",
        converter=pathlib.Path,
    )
    dmax = plug.cli.option(
        help="largest d for verify-appendix", converter=int, default=10 ** 4
    )
    kcap = plug.cli.option(
        help="largest k for verify-appendix", converter=int, default=60
    )
    stable_set_budget = plug.cli.option(
        help="largest number of stable sets to enumerate",
        converter=int,
        default=_stable.DEFAULT_STABLE_SET_BUDGET,
        configurable=True,
    )
    out = _out_option()

    def command(self) -> Optional[plug.Result]:
        try:
            payload, rows, msg, ok = self._run()
            if self.out and self.out.suffix == ".csv":
                self.out.write_text(
                    _format.format_table_csv(rows),
                    encoding=_fileutils.ENCODING,
                )
                msg += f"\nWrote {self.out}"
                out = None
            else:
                out = self.out
        except (_exceptions.SepchooseError, OSError) as exc:
            return _error("sepchoose-stable", exc)
        status = plug.Status.SUCCESS if ok else plug.Status.ERROR
        return _result("sepchoose-stable", msg, payload, out, status)

    def _run(self):
        if self.task == StableTask.VERIFY_APPENDIX:
            return self._verify_appendix()
        if self.graph is None:
            raise _exceptions.ParameterError(
                f"{self.task.value} needs a graph (--graph)"
            )
        g = _read_graph(self.graph)
        family = _stable.enumerate_stable_sets(g, self.stable_set_budget)
        if self.task == StableTask.ENUMERATE:
            sets = [list(s) for s in family.all_sets]
            payload = {"count": family.count, "stable_sets": sets}
            rows = [
                {"index": i, "size": len(s), "vertices": s}
                for i, s in enumerate(sets)
            ]
            return payload, rows, f"{family.count} stable sets", True

        expected = _stable.expected_degree_sum(g, family)
        marginals = _stable.marginals_of_uniform(g, family)
        x_stats = _stable.expected_x_statistics(g, family)
        # upper ends of the ln intervals keep the comparison conservative
        log_sum = sum(
            (_stable.ln_bounds(d)[1] for d in g.degrees() if d > 0),
            Fraction(0),
        )
        rows = [
            {
                "vertex": v,
                "degree": g.degree(v),
                "marginal": _format.format_rational(marginal),
                "neighbour_expectation": _format.format_rational(nbrs),
                "x_expectation": _format.format_rational(x),
            }
            for v, ((marginal, nbrs), x) in enumerate(zip(marginals, x_stats))
        ]
        holds = g.min_degree() < 1 or expected >= log_sum / 4
        payload = {
            "count": family.count,
            **_format.rational_fields("expected_degree_sum", expected),
            **_format.rational_fields("quarter_log_degree_sum", log_sum / 4),
            "lower_bound_holds": holds,
            "vertices": rows,
        }
        msg = f"E(sum of degrees in S) = {expected}"
        return payload, rows, msg, holds

    def _verify_appendix(self):
        report = _stable.verify_appendix_inequality(self.dmax, self.kcap)
        minimum = _stable.appendix_minimum()
        min_slack = report.min_slack or 0
        payload = {
            "d_max": report.d_max,
            "k_cap": report.k_cap,
            "checked": report.checked,
            "violations": [
                [d, k, _format.format_rational(s)]
                for d, k, s in report.violations
            ],
            "min_location": list(report.min_location or []),
            **_format.rational_fields("min_slack", min_slack),
            "minimum_x": minimum.x,
            "minimum_value": minimum.value,
        }
        rows = [
            {
                "d": d,
                "k": k,
                "slack": _format.format_rational(s),
            }
            for d, k, s in report.violations
        ] or [
            {
                "d": payload["min_location"][0],
                "k": payload["min_location"][1],
                "slack": payload["min_slack"],
            }
        ]
        msg = (
            f"Checked {report.checked} pairs, "
            f"{len(report.violations)} violations"
        )
        return payload, rows, msg, not report.violations


class Extract(plug.Plugin, plug.cli.Command):
    __settings__ = plug.cli.command_settings(
        help="extract a dense bipartite induced subgraph",
        description="extract a certified bipartite or semi-bipartite induced "
        "subgraph with exact density fields",
        action=sepchoose_category.extract,
    )
    graph = plug.cli.positional(
        help="edge-list file of the graph", converter=pathlib.Path
    )
    method = plug.cli.option(
        help="one of: " + ", ".join(m.value for m in ExtractMethod),
        converter=ExtractMethod,
        default=ExtractMethod.FRACTIONAL,
    )
    seed = plug.cli.option(
        help="seed for heuristic methods", converter=int, default=0
    )
    threshold = plug.cli.option(
        help="vertices left unpeeled (peeling), default ceil(n^(2/3))",
        converter=int,
    )
    pair_budget = plug.cli.option(
        help="largest number of support pairs to scan",
        converter=int,
        default=_extract.DEFAULT_PAIR_BUDGET,
        configurable=True,
    )
    oracle_vertices = plug.cli.option(
        help="largest graph the brute-force oracle accepts",
        converter=int,
        default=_extract.DEFAULT_ORACLE_VERTICES,
        configurable=True,
    )
    stable_set_budget = plug.cli.option(
        help="largest number of stable sets to enumerate",
        converter=int,
        default=_stable.DEFAULT_STABLE_SET_BUDGET,
        configurable=True,
    )
    out = _out_option()

    def command(self) -> Optional[plug.Result]:
        try:
            g = _read_graph(self.graph)
            witness, extra = self._extract(g)
        except (_exceptions.SepchooseError, OSError) as exc:
            return _error("sepchoose-extract", exc)
        if isinstance(witness, _extract.SemiBipartiteWitness):
            payload = _format.semi_witness_to_dict(witness)
        else:
            payload = _format.bipartite_witness_to_dict(witness)
        payload.update(extra)
        payload["method"] = self.method.value
        payload["verified"] = witness.verify(g)
        status = (
            plug.Status.SUCCESS if payload["verified"] else plug.Status.ERROR
        )
        return _result(
            "sepchoose-extract",
            f"{self.method.value} witness of average degree "
            f"{witness.avg_degree} and minimum degree {witness.min_degree}",
            payload,
            self.out,
            status,
        )

    def _extract(self, g: _graph.Graph):
        if self.method == ExtractMethod.FRACTIONAL:
            f = _coloring.fractional_chromatic_exact(
                g, self.stable_set_budget
            )
            dist = _coloring.fractional_to_distribution(f)
            witness = _extract.extract_from_distribution(
                g, dist, self.pair_budget
            )
            return witness, _format.rational_fields("k", f.value)
        if self.method == ExtractMethod.COLORING:
            chi, coloring = _coloring.chromatic_number_exact(g)
            return _extract.extract_from_coloring(g, coloring), {"k": chi}
        if self.method == ExtractMethod.PEELING:
            threshold = self.threshold
            if threshold is None:
                threshold = math.ceil(g.n ** (2 / 3))
            cover = _extract.aks_peeling_coloring(g, threshold)
            extra = {
                "classes": [list(cls) for cls in cover.classes],
                "leftover": list(cover.leftover),
                **_format.rational_fields(
                    "class_count_bound", cover.class_count_bound
                ),
            }
            return _extract.extract_from_cover(g, cover), extra
        if self.method == ExtractMethod.ORACLE:
            witness = _extract.max_bip_induced_oracle(g, self.oracle_vertices)
            return witness, {}
        mode = {
            ExtractMethod.SEMI_EXACT: _extract.SemiMode.EXACT,
            ExtractMethod.SEMI_SAMPLED: _extract.SemiMode.SAMPLED,
            ExtractMethod.SEMI_LOCAL: _extract.SemiMode.LOCAL_SEARCH,
        }[self.method]
        witness = _extract.best_semi_bipartite(
            g, mode, seed=self.seed, budget=self.stable_set_budget
        )
        return witness, {"one_sided": mode != _extract.SemiMode.EXACT}


class Sep(plug.Plugin, plug.cli.Command):
    __settings__ = plug.cli.command_settings(
        help="separation choosability",
        description="decide separation k-choosability exactly, or search for "
        "a bad list assignment",
        action=sepchoose_category.sep,
    )
    graph = plug.cli.positional(
        help="edge-list file of the graph", converter=pathlib.Path
    )
    k = plug.cli.option(help="list size", converter=int, required=True)
    mode = plug.cli.option(
        help="exact or search", converter=SepMode, default=SepMode.EXACT
    )
    trials = plug.cli.option(
        help="number of search trials",
        converter=int,
        default=_choosability.DEFAULT_TRIALS,
    )
    seed = plug.cli.option(help="seed of the search", converter=int, default=0)
    assignment_budget = plug.cli.option(
        help="largest number of canonical assignments to test",
        converter=int,
        default=_choosability.DEFAULT_ASSIGNMENT_BUDGET,
        configurable=True,
    )
    out = _out_option()

    def command(self) -> Optional[plug.Result]:
        try:
            g = _read_graph(self.graph)
            if self.mode == SepMode.EXACT:
                return self._decide(g)
            found = _choosability.search_bad_assignment(
                g, self.k, self.trials, self.seed
            )
        except (_exceptions.SepchooseError, OSError) as exc:
            return _error("sepchoose-sep", exc)
        payload = {"k": self.k, "witness": found.to_dict() if found else None}
        msg = (
            f"Found a bad {self.k}-assignment"
            if found
            else f"No bad {self.k}-assignment found in {self.trials} trials"
        )
        return _result("sepchoose-sep", msg, payload, self.out)

    def _decide(self, g: _graph.Graph) -> plug.Result:
        decision = _choosability.decide_sep_choosable(
            g, self.k, self.assignment_budget
        )
        payload = {"k": self.k, **_format.decision_to_dict(decision)}
        status = (
            plug.Status.WARNING
            if decision.status == _choosability.SepStatus.UNKNOWN
            else plug.Status.SUCCESS
        )
        return _result(
            "sepchoose-sep",
            f"{g} is {decision.status.value} for k = {self.k} "
            f"({decision.assignments_checked} assignments checked)",
            payload,
            self.out,
            status,
        )


class Exp(plug.Plugin, plug.cli.Command):
    __settings__ = plug.cli.command_settings(
        help="run an experiment campaign",
        description="run a reproducible Monte Carlo campaign described by a "
        "JSON spec and write CSV/JSON reports; the worker count is read from "
        f"${_experiments.WORKERS_ENV}",
        action=sepchoose_category.exp,
    )
    spec = plug.cli.option(
        help="JSON experiment spec", converter=pathlib.Path, required=True
    )
    out_dir = plug.cli.option(
        help="directory for the reports",
        converter=pathlib.Path,
        default=pathlib.Path("."),
    )

    def command(self) -> Optional[plug.Result]:
        try:
            spec = _experiments.ExperimentSpec.from_json(
                self.spec.read_text(encoding=_fileutils.ENCODING)
            )
            workers = _workers()
            record = _experiments.RUNNERS[spec.kind](spec, workers)
            paths = _experiments.emit_report(record, self.out_dir)
        except (_exceptions.SepchooseError, OSError) as exc:
            return _error("sepchoose-exp", exc)
        failed = sum(1 for row in record.rows if not row.verified)
        status = plug.Status.WARNING if failed else plug.Status.SUCCESS
        return plug.Result(
            name="sepchoose-exp",
            msg=f"{len(record.rows)} rows ({failed} unverified) written to "
            + ", ".join(str(p) for p in paths),
            status=status,
            data={"paths": [str(p) for p in paths], **record.summary()},
        )


def _workers() -> int:
    raw = os.environ.get(_experiments.WORKERS_ENV, "1")
    try:
        workers = int(raw)
    except ValueError as exc:
        raise _exceptions.ParameterError(
            f"{_experiments.WORKERS_ENV} must be an integer, got '{raw}'"
        ) from exc
    return max(1, workers)


class Verify(plug.Plugin, plug.cli.Command):
    __settings__ = plug.cli.command_settings(
        help="run the exact verification suites",
        description="re-check the extraction bounds, expectation "
        "inequalities, reductions and ground truths over the small-graph "
        "catalog",
        action=sepchoose_category.verify,
    )
    suites = plug.cli.option(
        help="comma separated suites, default all: "
        + ", ".join(_suites.SUITES),
        default=",".join(_suites.SUITES),
    )
    max_vertices = plug.cli.option(
        help="all connected graphs up to this size form the corpus (at most "
        f"{_catalog.CATALOG_MAX_VERTICES})",
        converter=int,
        default=_suites.SuiteConfig.max_vertices,
    )
    sample_count = plug.cli.option(
        help="sampled graphs one vertex above --max-vertices added to the "
        "corpus",
        converter=int,
        default=_suites.SuiteConfig.sample_count,
    )
    seed = plug.cli.option(help="corpus seed", converter=int, default=0)
    out = _out_option()

    def command(self) -> Optional[plug.Result]:
        config = _suites.SuiteConfig(
            max_vertices=self.max_vertices,
            sample_count=self.sample_count,
            seed=self.seed,
        )
        names = [
            name.strip() for name in self.suites.split(",") if name.strip()
        ]
        try:
            reports = _suites.run_suites(names, config)
        except _exceptions.SepchooseError as exc:
            return _error("sepchoose-verify", exc)
        failures = [f for report in reports for f in report.failures]
        payload = {
            report.name: {
                "checked": report.checked,
                "failures": [f"{f.item}: {f.msg}" for f in report.failures],
            }
            for report in reports
        }
        if failures:
            return _result(
                "sepchoose-verify",
                _format.format_failures(failures),
                payload,
                self.out,
                plug.Status.ERROR,
            )
        checked = sum(report.checked for report in reports)
        return _result(
            "sepchoose-verify",
            f"All {checked} checks in {len(reports)} suite(s) passed",
            payload,
            self.out,
        )
