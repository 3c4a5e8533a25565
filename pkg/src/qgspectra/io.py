"""Graph description documents and deterministic output helpers.

A document is JSON with top-level keys:

* ``vertices``: list of {"id": int, "condition": {...}} where the condition
  is {"type": "nk"} | {"type": "delta", "sigma": r} |
  {"type": "delta_s", "alpha": r, "t": r or "inf" or "-inf"}
* ``edges``: list of {"id": int, "from": int, "to": int, "length": "1.5"}
  (lengths are decimal strings, parsed to binary floating point; the writer
  emits shortest round-tripping representations so parse(write(x)) == x
  bit-exactly)
* ``points``: optional, named lists of {"edge": int, "x": "0.5"}

CSV output uses '.' decimals, '\\n' line endings and 17-significant-digit
floats so identical inputs produce identical bytes on any platform.
"""

from __future__ import annotations

import json
import math
from typing import Any

from .conditions import ConditionAssignment, VertexCondition, delta, delta_s, nk
from .errors import ParseError
from .graph import Edge, MetricGraph, PointOnEdge


def _parse_length(raw: Any, context: str) -> float:
    if isinstance(raw, str):
        try:
            return float(raw)
        except ValueError as exc:
            raise ParseError(f"{context}: bad decimal string {raw!r}") from exc
    if isinstance(raw, (int, float)):
        return float(raw)
    raise ParseError(f"{context}: expected a number or decimal string, got {type(raw).__name__}")


def _parse_condition(raw: Any, vertex: int) -> VertexCondition:
    if raw is None:
        return nk()
    if not isinstance(raw, dict) or "type" not in raw:
        raise ParseError(f"vertex {vertex}: condition must be an object with a 'type'")
    kind = raw["type"]
    if kind == "nk":
        return nk()
    if kind == "delta":
        return delta(_parse_length(raw.get("sigma", 0.0), f"vertex {vertex} sigma"))
    if kind == "delta_s":
        t_raw = raw.get("t", 0.0)
        if t_raw == "inf":
            t = math.inf
        elif t_raw == "-inf":
            t = -math.inf
        else:
            t = _parse_length(t_raw, f"vertex {vertex} t")
        return delta_s(_parse_length(raw.get("alpha", 0.0), f"vertex {vertex} alpha"), t)
    raise ParseError(f"vertex {vertex}: unknown condition type {kind!r}")


def parse_document(doc: dict | str) -> tuple[MetricGraph, ConditionAssignment, dict[str, list[PointOnEdge]]]:
    if isinstance(doc, str):
        try:
            doc = json.loads(doc)
        except json.JSONDecodeError as exc:
            raise ParseError(f"not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise ParseError("document root must be an object")
    try:
        vertices = [int(v["id"]) for v in doc.get("vertices", [])]
        edges = [
            Edge(int(e["id"]), int(e["from"]), int(e["to"]), _parse_length(e["length"], f"edge {e.get('id')}"))
            for e in doc.get("edges", [])
        ]
    except (KeyError, TypeError) as exc:
        raise ParseError(f"malformed vertex/edge entry: {exc}") from exc
    try:
        graph = MetricGraph(vertices, edges)
    except Exception as exc:
        raise ParseError(str(exc)) from exc
    conditions = {}
    for v in doc.get("vertices", []):
        cond = _parse_condition(v.get("condition"), int(v["id"]))
        if cond.kind != "nk":
            conditions[int(v["id"])] = cond
    try:
        assignment = ConditionAssignment(graph, conditions)
    except Exception as exc:
        raise ParseError(str(exc)) from exc
    points: dict[str, list[PointOnEdge]] = {}
    for name, plist in (doc.get("points") or {}).items():
        points[name] = [
            PointOnEdge(int(p["edge"]), _parse_length(p["x"], f"point set {name}")) for p in plist
        ]
    return graph, assignment, points


def _condition_json(cond: VertexCondition) -> dict:
    if cond.kind == "nk":
        return {"type": "nk"}
    if cond.alpha == 0.0 and not math.isinf(cond.t):
        return {"type": "delta", "sigma": cond.t}
    t: Any = cond.t
    if math.isinf(cond.t):
        t = "inf" if cond.t > 0 else "-inf"
    return {"type": "delta_s", "alpha": cond.alpha, "t": t}


def write_document(
    graph: MetricGraph,
    assignment: ConditionAssignment | None = None,
    points: dict[str, list[PointOnEdge]] | None = None,
) -> str:
    doc: dict[str, Any] = {
        "vertices": [
            {"id": v, "condition": _condition_json(assignment.condition(v) if assignment else nk())}
            for v in graph.vertices
        ],
        "edges": [
            {"id": e.id, "from": e.tail, "to": e.head, "length": repr(e.length)}
            for e in graph.edges
        ],
    }
    if points:
        doc["points"] = {
            name: [{"edge": p.edge, "x": repr(p.x)} for p in plist] for name, plist in sorted(points.items())
        }
    return json.dumps(doc, indent=1, sort_keys=True) + "\n"


def fmt(x: float) -> str:
    """17-significant-digit float formatting (round-trips exactly)."""
    return "%.17g" % x


def write_csv(path: str, header: list[str], rows: list[list]) -> None:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(fmt(c) if isinstance(c, float) else str(c) for c in row))
    with open(path, "w", newline="") as fh:
        fh.write("\n".join(lines) + "\n")
