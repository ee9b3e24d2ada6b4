"""Serialization of graphs, tables and results."""
import csv
from enum import Enum
from fractions import Fraction
import io
import json
from typing import Any, Dict, Iterable, List, Optional, Sequence

from .helpers import fraction_to_dict
from .stallings import StallingsGraph
from .words import letter_char


def graph_to_dict(graph: StallingsGraph) -> Dict[str, Any]:
    """JSON graph schema {rank, vertices, base, edges: [{src, dst, label, weight}]}."""
    return graph.as_dict()


def graph_to_dot(graph: StallingsGraph, name: str = "subgroup") -> str:
    """Return the graph in graphviz dot syntax; bad vertices are drawn red."""
    lines = [f"digraph {name} {{", "\trankdir=LR;"]
    for vertex in graph.vertices:
        attributes = [f'label="v{vertex}"']
        if vertex == graph.base:
            attributes.append("shape=doublecircle")
        if graph.missing_letters(vertex):
            attributes.append("color=red")
        lines.append(f'\t"{vertex}" [{", ".join(attributes)}];')
    for edge in graph.edges:
        lines.append(
            f'\t"{edge.source}" -> "{edge.target}" [label="{letter_char(edge.label)}"];'
        )
    lines.append("}")
    return "\n".join(lines) + "\n"


def table_to_csv(
    rows: Iterable[Dict[str, Any]], fieldnames: Optional[Sequence[str]] = None
) -> str:
    """Return rows as CSV with a header line."""
    rows = list(rows)
    if fieldnames is None:
        fieldnames = list(rows[0]) if rows else []
    buffer = io.StringIO()
    writer = csv.DictWriter(buffer, fieldnames=list(fieldnames), lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)
    return buffer.getvalue()


def _default(value: Any) -> Any:
    if isinstance(value, Fraction):
        return fraction_to_dict(value)
    if isinstance(value, Enum):
        return value.value
    if hasattr(value, "as_dict"):
        return value.as_dict()
    if isinstance(value, (tuple, frozenset, set)):
        return list(value)
    raise TypeError(f"{type(value).__name__} is not JSON serializable")


def to_json(value: Any) -> str:
    """Return deterministic JSON for results."""
    return json.dumps(value, default=_default, indent=2, sort_keys=True)


def tables_to_csv(tables: Dict[str, List[Dict[str, Any]]]) -> str:
    """Return every table as CSV, each preceded by a `# name` line."""
    return "\n".join(
        f"# {name}\n{table_to_csv(rows)}" for name, rows in sorted(tables.items())
    )
