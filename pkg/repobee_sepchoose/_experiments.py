"""Reproducible Monte Carlo campaigns.

.. module:: _experiments
    :synopsis: Experiment specs, per-trial rows, deterministic aggregation and
        CSV/JSON reports for the random-graph scaling experiments.

Every trial is a pure function of the spec and its ``(point, trial)`` index:
its seed is ``derive_seed(master_seed, point, trial)``. Trials may therefore
run in any order and on any number of worker processes; rows are sorted by
``(point, trial, method)`` before they are aggregated or written.
"""
import collections
import csv
import dataclasses
import enum
import hashlib
import io
import json
import math
import multiprocessing
import pathlib
import statistics
import time
from fractions import Fraction
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

import daiquiri

from repobee_sepchoose import (
    _coloring,
    _exceptions,
    _extract,
    _fileutils,
    _format,
    _generators,
    _graph,
    _rng,
)

LOGGER = daiquiri.getLogger(__file__)

SCHEMA_VERSION = 1
WORKERS_ENV = "SEPCHOOSE_WORKERS"

COLUMNS = [
    "point",
    "trial",
    "n",
    "param",
    "seed",
    "method",
    "witness_size1",
    "witness_size2",
    "cross_edges",
    "avg_degree_rational",
    "avg_degree_float",
    "min_degree",
    "runtime_ms",
    "verified",
    "one_sided",
    "ratio",
    "error",
    "extras",
]

Row = collections.namedtuple("Row", COLUMNS)


class ExperimentKind(enum.Enum):
    ERDOSRENYI = "erdosrenyi"
    TRIANGLEBIP = "trianglebip"
    TRANSITION = "transition"


class Method(enum.Enum):
    SEMI_EXACT = "semi_exact"
    SEMI_SAMPLED = "semi_sampled"
    SEMI_LOCAL = "semi_local"
    COLORING = "coloring"
    ORACLE = "oracle"

    @property
    def one_sided(self) -> bool:
        return self not in (Method.SEMI_EXACT, Method.ORACLE)


@dataclasses.dataclass(frozen=True)
class ExperimentSpec:
    """A campaign: every ``(n, param)`` point of the sweep is run ``trials``
    times with every method.

    ``param`` means ``p = param * n^param_exponent`` for ``erdosrenyi``, the
    density constant ``D`` for ``trianglebip`` and the exponent ``eta`` of
    the target minimum degree ``n^eta`` for ``transition``.
    """

    name: str
    kind: ExperimentKind
    n_values: Tuple[int, ...]
    params: Tuple[float, ...]
    trials: int
    master_seed: int
    methods: Tuple[Method, ...] = (Method.SEMI_LOCAL,)
    param_exponent: float = 0.0
    local_search_steps: int = _extract.DEFAULT_LOCAL_SEARCH_STEPS
    samples: int = _extract.DEFAULT_SAMPLES
    oracle_vertices: int = _extract.DEFAULT_ORACLE_VERTICES
    formats: Tuple[str, ...] = ("csv", "json")
    record_runtime: bool = False

    def __post_init__(self):
        object.__setattr__(self, "kind", ExperimentKind(self.kind))
        object.__setattr__(
            self, "methods", tuple(Method(m) for m in self.methods)
        )
        object.__setattr__(self, "n_values", tuple(map(int, self.n_values)))
        object.__setattr__(self, "params", tuple(map(float, self.params)))
        object.__setattr__(self, "formats", tuple(self.formats))
        if not self.n_values or not self.params or not self.methods:
            raise _exceptions.ParameterError(
                "n_values, params and methods must be nonempty"
            )
        if self.trials < 1:
            raise _exceptions.ParameterError(
                f"trials must be >= 1: {self.trials}"
            )
        unknown = set(self.formats) - {"csv", "json"}
        if unknown:
            raise _exceptions.ParameterError(
                f"unknown report formats: {sorted(unknown)}"
            )
        _rng._check_seed(self.master_seed)

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "ExperimentSpec":
        fields = {f.name for f in dataclasses.fields(cls)}
        unknown = set(data) - fields
        if unknown:
            raise _exceptions.ParameterError(
                f"unknown experiment spec keys: {sorted(unknown)}"
            )
        try:
            return cls(**data)
        except (TypeError, ValueError) as exc:
            raise _exceptions.ParameterError(
                f"invalid experiment spec: {exc}"
            ) from exc

    @classmethod
    def from_json(cls, text: str) -> "ExperimentSpec":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise _exceptions.ParameterError(
                f"experiment spec is not valid JSON: {exc}"
            ) from exc
        return cls.from_dict(data)

    def to_dict(self) -> Dict[str, Any]:
        data = dataclasses.asdict(self)
        data["kind"] = self.kind.value
        data["methods"] = [m.value for m in self.methods]
        for field in ("n_values", "params", "formats"):
            data[field] = list(data[field])
        return data

    def spec_hash(self) -> str:
        """sha256 of the canonical JSON form of the spec."""
        canonical = json.dumps(
            self.to_dict(), sort_keys=True, separators=(",", ":")
        )
        digest = hashlib.sha256(canonical.encode(_fileutils.ENCODING))
        return digest.hexdigest()

    def points(self) -> List[Tuple[int, float]]:
        return [(n, param) for n in self.n_values for param in self.params]


@dataclasses.dataclass(frozen=True)
class RunRecord:
    spec: ExperimentSpec
    spec_hash: str
    rows: Tuple[Row, ...]
    aggregates: Tuple[Dict[str, Any], ...]

    def summary(self) -> Dict[str, Any]:
        return ratio_band(self.aggregates)


def run_experiment(spec: ExperimentSpec, workers: int = 1) -> RunRecord:
    """Run every trial of ``spec`` and aggregate the rows."""
    tasks = [
        (spec, point, trial)
        for point in range(len(spec.points()))
        for trial in range(spec.trials)
    ]
    LOGGER.info(
        f"Running {len(tasks)} trials of '{spec.name}' "
        f"({spec.kind.value}) on {workers} worker(s)"
    )
    if workers > 1:
        with multiprocessing.Pool(processes=workers) as pool:
            results = pool.map(_run_task, tasks)
    else:
        results = [_run_task(task) for task in tasks]
    order = {m: i for i, m in enumerate(spec.methods)}
    rows = sorted(
        (row for rows in results for row in rows),
        key=lambda r: (r.point, r.trial, order[Method(r.method)]),
    )
    return RunRecord(
        spec=spec,
        spec_hash=spec.spec_hash(),
        rows=tuple(rows),
        aggregates=tuple(aggregate(rows)),
    )


def run_erdosrenyi_scaling(spec: ExperimentSpec, workers: int = 1):
    """Semi-bipartite density of ``gnp(n, p)`` against ``ln(np)``."""
    return run_experiment(_with_kind(spec, ExperimentKind.ERDOSRENYI), workers)


def run_trianglebip_stats(spec: ExperimentSpec, workers: int = 1):
    """Construction statistics of the triangle-free graphs and their best
    semi-bipartite density found, against ``ln n``.
    """
    spec = _with_kind(spec, ExperimentKind.TRIANGLEBIP)
    return run_experiment(spec, workers)


def run_transition_profile(spec: ExperimentSpec, workers: int = 1):
    """Best bipartite minimum degree in triangle-free graphs of minimum
    degree about ``n^eta``.
    """
    return run_experiment(_with_kind(spec, ExperimentKind.TRANSITION), workers)


RUNNERS: Dict[ExperimentKind, Callable[[ExperimentSpec, int], RunRecord]] = {
    ExperimentKind.ERDOSRENYI: run_erdosrenyi_scaling,
    ExperimentKind.TRIANGLEBIP: run_trianglebip_stats,
    ExperimentKind.TRANSITION: run_transition_profile,
}


def _with_kind(spec: ExperimentSpec, kind: ExperimentKind) -> ExperimentSpec:
    if spec.kind != kind:
        raise _exceptions.ParameterError(
            f"spec '{spec.name}' is a {spec.kind.value} experiment, "
            f"expected {kind.value}"
        )
    return spec


def _run_task(task: Tuple[ExperimentSpec, int, int]) -> List[Row]:
    spec, point, trial = task
    n, param = spec.points()[point]
    seed = _rng.derive_seed(spec.master_seed, point, trial)
    build = _GRAPH_BUILDERS[spec.kind]
    graph, extras, scale = build(spec, n, param, seed)
    rows = []
    for method in spec.methods:
        row = _run_method(spec, method, graph, point, trial, n, param, seed)
        rows.append(_with_ratio(row, scale, spec.kind, extras))
    return rows


def _with_ratio(
    row: Row,
    scale: Optional[float],
    kind: ExperimentKind,
    extras: Dict[str, Any],
) -> Row:
    if row.error or not scale:
        ratio = None
    elif kind == ExperimentKind.TRANSITION:
        ratio = row.min_degree / scale
    else:
        ratio = row.avg_degree_float / scale
    return row._replace(ratio=ratio, extras=json.dumps(extras, sort_keys=True))


def _erdosrenyi_graph(spec: ExperimentSpec, n: int, param: float, seed: int):
    p = min(1.0, max(0.0, param * n ** spec.param_exponent)) if n else 0.0
    graph = _generators.gnp(n, p, seed)
    np_value = n * p
    scale = math.log(np_value) if np_value > 1 else None
    extras = {"p": p, "edges": graph.num_edges, "ln_np": scale}
    return graph, extras, scale


def _trianglebip_graph(spec: ExperimentSpec, n: int, param: float, seed: int):
    graph, stats = _generators.triangle_free_construction(n, param, seed)
    extras = dict(stats._asdict())
    extras["triangle_free"] = not _graph.list_triangles(graph)
    scale = math.log(n) if n > 1 else None
    return graph, extras, scale


TRANSITION_GRID = (1, 1.5, 2, 3, 4, 6, 8, 12, 16, 24, 32)


def _transition_graph(spec: ExperimentSpec, n: int, param: float, seed: int):
    """Search the geometric grid ``p = q * target / n`` for the sparsest
    sample whose triangle-free remainder still has a core of minimum degree
    ``target = ceil(n^eta)``, and return that core.
    """
    target = math.ceil(n ** param) if n else 0
    graph, reached, chosen_p = _graph.Graph(0, []), False, None
    for q in TRANSITION_GRID:
        p = min(1.0, q * target / n) if n else 0.0
        sample = _generators.gnp(n, p, seed)
        triangle_free = _generators.delete_triangles(sample)
        core = _graph.peel_to_min_degree(triangle_free, target)
        chosen_p = p
        if core:
            graph = _graph.induced_subgraph(triangle_free, core).graph
            reached = True
            break
        graph = triangle_free
        if p >= 1.0:
            break
    if not reached:
        LOGGER.warning(
            f"No triangle-free core of minimum degree {target} found for "
            f"n = {n}, eta = {param}"
        )
    extras = {
        "target_min_degree": target,
        "reached_min_degree": reached,
        "p": chosen_p,
        "graph_n": graph.n,
        "graph_min_degree": graph.min_degree(),
    }
    return graph, extras, math.log(n) if n > 1 else None


_GRAPH_BUILDERS: Dict[ExperimentKind, Callable] = {
    ExperimentKind.ERDOSRENYI: _erdosrenyi_graph,
    ExperimentKind.TRIANGLEBIP: _trianglebip_graph,
    ExperimentKind.TRANSITION: _transition_graph,
}


def _run_method(
    spec: ExperimentSpec,
    method: Method,
    g: _graph.Graph,
    point: int,
    trial: int,
    n: int,
    param: float,
    seed: int,
) -> Row:
    start = time.perf_counter()
    error = ""
    try:
        witness = _extract_with(spec, method, g, seed)
        verified = witness.verify(g)
    except _exceptions.SepchooseError as exc:
        LOGGER.warning(f"{method.value} failed on point {point}: {exc}")
        witness, verified, error = None, False, str(exc)
    runtime = (
        int((time.perf_counter() - start) * 1000) if spec.record_runtime else 0
    )
    sizes, edges, avg = _witness_metrics(witness)
    return Row(
        point=point,
        trial=trial,
        n=n,
        param=param,
        seed=seed,
        method=method.value,
        witness_size1=sizes[0],
        witness_size2=sizes[1],
        cross_edges=edges,
        avg_degree_rational=_format.format_rational(avg),
        avg_degree_float=float(avg),
        min_degree=witness.min_degree if witness else 0,
        runtime_ms=runtime,
        verified=verified,
        one_sided=method.one_sided,
        ratio=None,
        error=error,
        extras="{}",
    )


def _extract_with(
    spec: ExperimentSpec, method: Method, g: _graph.Graph, seed: int
):
    if method == Method.SEMI_EXACT:
        return _extract.best_semi_bipartite(g, _extract.SemiMode.EXACT)
    if method == Method.SEMI_SAMPLED:
        return _extract.best_semi_bipartite(
            g, _extract.SemiMode.SAMPLED, seed=seed, samples=spec.samples
        )
    if method == Method.SEMI_LOCAL:
        return _extract.best_semi_bipartite(
            g,
            _extract.SemiMode.LOCAL_SEARCH,
            seed=seed,
            steps=spec.local_search_steps,
        )
    if method == Method.COLORING:
        return _extract.extract_from_coloring(
            g, _coloring.greedy_coloring(g)
        )
    return _extract.max_bip_induced_oracle(g, spec.oracle_vertices)


def _witness_metrics(witness) -> Tuple[Tuple[int, int], int, Fraction]:
    if witness is None:
        return (0, 0), 0, Fraction(0)
    if isinstance(witness, _extract.SemiBipartiteWitness):
        return (
            (len(witness.stable_part), len(witness.other_part)),
            witness.cross_edge_count,
            witness.avg_degree,
        )
    return (
        (len(witness.part1), len(witness.part2)),
        witness.edge_count,
        witness.avg_degree,
    )


def aggregate(rows: Sequence[Row]) -> List[Dict[str, Any]]:
    """Per ``(point, method)`` statistics, recomputed from the rows alone.

    Only verified rows enter the statistics; the others are counted.
    """
    groups: Dict[Tuple[int, str], List[Row]] = collections.defaultdict(list)
    for row in rows:
        groups[(row.point, row.method)].append(row)
    aggregates = []
    for (point, method), group in groups.items():
        good = [r for r in group if r.verified]
        avgs = [_format.parse_rational(r.avg_degree_rational) for r in good]
        ratios = [r.ratio for r in good if r.ratio is not None]
        entry = {
            "point": point,
            "n": group[0].n,
            "param": group[0].param,
            "method": method,
            "rows": len(group),
            "verified_rows": len(good),
            "max_min_degree": max((r.min_degree for r in good), default=0),
            "one_sided": group[0].one_sided,
        }
        if avgs:
            entry.update(
                _format.rational_fields("mean_avg_degree", _mean(avgs))
            )
            entry.update(
                _format.rational_fields(
                    "median_avg_degree", statistics.median(avgs)
                )
            )
            entry.update(_format.rational_fields("max_avg_degree", max(avgs)))
        entry["mean_ratio"] = sum(ratios) / len(ratios) if ratios else None
        entry["min_ratio"] = min(ratios, default=None)
        entry["max_ratio"] = max(ratios, default=None)
        aggregates.append(entry)
    return aggregates


def _mean(values: List[Fraction]) -> Fraction:
    return sum(values, Fraction(0)) / len(values)


def ratio_band(aggregates: Sequence[Dict[str, Any]]) -> Dict[str, Any]:
    """The band ``[low, high]`` spanned by the mean ratios of all points,
    with ``high / low``. The scaling claim is judged by this band, never by a
    fixed constant.
    """
    means = [a["mean_ratio"] for a in aggregates if a["mean_ratio"]]
    if not means:
        return {"low": None, "high": None, "spread": None}
    low, high = min(means), max(means)
    return {"low": low, "high": high, "spread": high / low if low else None}


def emit_report(
    record: RunRecord,
    out_dir: pathlib.Path,
    formats: Optional[Sequence[str]] = None,
) -> List[pathlib.Path]:
    """Write the record as ``<name>.csv`` and/or ``<name>.json``.

    Returns:
        The written paths.
    """
    out_dir = pathlib.Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    paths = []
    for fmt in formats or record.spec.formats:
        path = out_dir / f"{record.spec.name}.{fmt}"
        if fmt == "csv":
            path.write_text(format_csv(record), encoding=_fileutils.ENCODING)
        elif fmt == "json":
            _fileutils.write_json(record_to_dict(record), path)
        else:
            raise _exceptions.ParameterError(f"unknown report format: {fmt}")
        paths.append(path)
    LOGGER.info(f"Wrote {', '.join(str(p) for p in paths)}")
    return paths


def format_csv(record: RunRecord) -> str:
    buffer = io.StringIO()
    buffer.write(f"# schema_version={SCHEMA_VERSION}\n")
    buffer.write(f"# spec_hash={record.spec_hash}\n")
    writer = csv.DictWriter(buffer, fieldnames=COLUMNS, lineterminator="\n")
    writer.writeheader()
    for row in record.rows:
        writer.writerow(_row_to_dict(row, csv_cells=True))
    return buffer.getvalue()


def record_to_dict(record: RunRecord) -> Dict[str, Any]:
    return {
        "schema_version": SCHEMA_VERSION,
        "spec_hash": record.spec_hash,
        "spec": record.spec.to_dict(),
        "rows": [_row_to_dict(row) for row in record.rows],
        "aggregates": list(record.aggregates),
        "summary": record.summary(),
    }


def _row_to_dict(row: Row, csv_cells: bool = False) -> Dict[str, Any]:
    data = row._asdict()
    if csv_cells:
        data["verified"] = str(row.verified).lower()
        data["one_sided"] = str(row.one_sided).lower()
        data["ratio"] = "" if row.ratio is None else repr(row.ratio)
    else:
        data["extras"] = json.loads(row.extras)
    return data


def parse_report(path: pathlib.Path) -> Tuple[str, List[Row]]:
    """Read the rows back from a CSV or JSON report.

    Returns:
        The spec hash and the rows.
    """
    path = pathlib.Path(path)
    text = path.read_text(encoding=_fileutils.ENCODING)
    if path.suffix == ".json":
        data = json.loads(text)
        _check_schema(data.get("schema_version"))
        rows = [
            Row(**{**r, "extras": json.dumps(r["extras"], sort_keys=True)})
            for r in data["rows"]
        ]
        return data["spec_hash"], rows
    comments = {}
    lines = text.splitlines()
    while lines and lines[0].startswith("#"):
        key, _, value = lines.pop(0)[1:].strip().partition("=")
        comments[key] = value
    _check_schema(int(comments.get("schema_version", -1)))
    rows = [_row_from_cells(cells) for cells in csv.DictReader(lines)]
    return comments.get("spec_hash", ""), rows


def _check_schema(version) -> None:
    if version != SCHEMA_VERSION:
        raise _exceptions.ParameterError(
            f"unsupported report schema version: {version}"
        )


def _row_from_cells(cells: Dict[str, str]) -> Row:
    ints = ("point", "trial", "n", "seed", "witness_size1", "witness_size2")
    ints += ("cross_edges", "min_degree", "runtime_ms")
    values: Dict[str, Any] = dict(cells)
    for name in ints:
        values[name] = int(cells[name])
    values["param"] = float(cells["param"])
    values["avg_degree_float"] = float(cells["avg_degree_float"])
    values["verified"] = cells["verified"] == "true"
    values["one_sided"] = cells["one_sided"] == "true"
    values["ratio"] = float(cells["ratio"]) if cells["ratio"] else None
    return Row(**values)
