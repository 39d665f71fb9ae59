"""Functions for reading and writing graphs and reports.

.. module:: _fileutils
    :synopsis: Edge-list interchange format and deterministic JSON output.
"""
import json
import pathlib
from typing import Any, List, Mapping

from repobee_sepchoose import _exceptions, _graph

ENCODING = "utf8"


def parse_edge_list(text: str) -> _graph.Graph:
    """Parse the edge-list format: a header line ``n m`` followed by ``m``
    lines ``u v`` with 0-based vertex ids. Blank lines are ignored.

    Args:
        text: Content in edge-list format.
    Returns:
        The graph.
    Raises:
        GraphFormatError: If the text is not in edge-list format.
    """
    lines = [line.split() for line in text.splitlines() if line.strip()]
    if not lines:
        raise _exceptions.GraphFormatError("missing 'n m' header line")
    header, *body = lines
    if len(header) != 2:
        raise _exceptions.GraphFormatError(
            f"header must be 'n m', got: '{' '.join(header)}'"
        )
    n, m = _parse_ints(header, line_number=1)
    if len(body) != m:
        raise _exceptions.GraphFormatError(
            f"header announces {m} edges but {len(body)} were given"
        )
    edges = []
    for line_number, fields in enumerate(body, start=2):
        if len(fields) != 2:
            raise _exceptions.GraphFormatError(
                f"Line {line_number}: expected 'u v'"
            )
        edges.append(tuple(_parse_ints(fields, line_number)))
    return _graph.build_graph(n, edges)


def _parse_ints(fields: List[str], line_number: int) -> List[int]:
    try:
        return [int(field) for field in fields]
    except ValueError as exc:
        raise _exceptions.GraphFormatError(
            f"Line {line_number}: non-integer field in '{' '.join(fields)}'"
        ) from exc


def format_edge_list(g: _graph.Graph) -> str:
    """Format a graph in edge-list format, edges in ascending order."""
    lines = [f"{g.n} {g.num_edges}"]
    lines.extend(f"{u} {v}" for u, v in g.edges)
    return "\n".join(lines) + "\n"


def read_edge_list(path: pathlib.Path) -> _graph.Graph:
    return parse_edge_list(pathlib.Path(path).read_text(encoding=ENCODING))


def write_edge_list(g: _graph.Graph, path: pathlib.Path) -> None:
    pathlib.Path(path).write_text(format_edge_list(g), encoding=ENCODING)


def dump_json(data: Mapping[str, Any]) -> str:
    """Serialize to JSON with sorted keys so that equal data always produces
    identical bytes.
    """
    return json.dumps(data, sort_keys=True, indent=2) + "\n"


def write_json(data: Mapping[str, Any], path: pathlib.Path) -> None:
    path = pathlib.Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(dump_json(data), encoding=ENCODING)
