"""Functions relating to the formatting of results used in repobee-sepchoose.

.. module:: _format
    :synopsis: Exact rationals as ``"num/den"`` strings, JSON-ready views of
        witnesses, colourings and assignments, and error messages for the
        command line.
"""
import collections
import csv
import io
from fractions import Fraction
from typing import Any, Dict, List, Mapping, Sequence, Union

from repobee_sepchoose import _choosability, _coloring, _extract

Failure = collections.namedtuple("Failure", "suite item msg")


def format_rational(value: Union[int, Fraction]) -> str:
    """Format an exact rational as ``"num/den"``; integers get ``/1``."""
    value = Fraction(value)
    return f"{value.numerator}/{value.denominator}"


def parse_rational(text: str) -> Fraction:
    """Inverse of :py:func:`format_rational`. Plain integers are accepted."""
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"not a rational: '{text}'") from exc


def rational_fields(name: str, value: Fraction) -> Dict[str, Any]:
    """The exact field ``name`` and its float convenience field."""
    return {name: format_rational(value), f"{name}_float": float(value)}


def bipartite_witness_to_dict(
    w: _extract.BipartiteWitness,
) -> Dict[str, Any]:
    return {
        "part1": list(w.part1),
        "part2": list(w.part2),
        "edge_count": w.edge_count,
        "min_degree": w.min_degree,
        **rational_fields("avg_degree", w.avg_degree),
    }


def semi_witness_to_dict(
    w: _extract.SemiBipartiteWitness,
) -> Dict[str, Any]:
    return {
        "stable_part": list(w.stable_part),
        "other_part": list(w.other_part),
        "cross_edge_count": w.cross_edge_count,
        "min_degree": w.min_degree,
        **rational_fields("avg_degree", w.avg_degree),
    }


def coloring_to_dict(c: _coloring.ProperColoring) -> Dict[str, Any]:
    return {"k": c.k, "classes": [list(cls) for cls in c.classes()]}


def fractional_to_dict(f: _coloring.FractionalColoring) -> Dict[str, Any]:
    return {
        **rational_fields("value", f.value),
        "support": [list(s) for s in f.support],
        "weights": [format_rational(w) for w in f.weights],
        "clique_weights": [format_rational(y) for y in f.clique_weights],
    }


def distribution_to_dict(
    dist: _coloring.StableSetDistribution,
) -> Dict[str, Any]:
    return {
        "support": [list(s) for s in dist.support],
        "probabilities": [format_rational(p) for p in dist.probabilities],
        "marginals": [format_rational(m) for m in dist.marginals],
    }


def decision_to_dict(decision: _choosability.SepDecision) -> Dict[str, Any]:
    return {
        "status": decision.status.value,
        "assignments_checked": decision.assignments_checked,
        "witness": decision.witness.to_dict() if decision.witness else None,
    }


def format_failures(failures: List[Failure]) -> str:
    """Format suite failures the way syntax errors are listed per file: one
    header line, then the failures grouped by suite.

    Args:
        failures: Failures of any number of suites.
    Returns:
        A string ready to be printed on the command line.
    """
    by_suite = collections.defaultdict(list)
    for failure in failures:
        by_suite[failure.suite].append(failure)
    formatted = [f"{len(failures)} failure(s) in {len(by_suite)} suite(s):\n"]
    for suite, suite_failures in by_suite.items():
        formatted.append(f"\n{suite}\n")
        for failure in suite_failures:
            formatted.append(f"    {failure.item}: {failure.msg}\n")
    return "".join(formatted)


def format_table_csv(rows: Sequence[Mapping[str, Any]]) -> str:
    """Format dict rows as CSV with a header taken from the first row. List
    cells are joined with spaces.
    """
    if not rows:
        return ""
    buffer = io.StringIO()
    writer = csv.DictWriter(
        buffer, fieldnames=list(rows[0]), lineterminator="\n"
    )
    writer.writeheader()
    for row in rows:
        writer.writerow(
            {
                key: " ".join(map(str, value))
                if isinstance(value, (list, tuple))
                else value
                for key, value in row.items()
            }
        )
    return buffer.getvalue()
