"""Strict JSON input/output for graph models and cut solutions.

Input shape::

    {"graph": {"target": id,
               "nodes": [{"id", "type", "value"}, ...],
               "edges": [{"source", "target"}, ...]}}

"type" is one of sensor/actuator/agent/and/or; "value" is a decimal string,
"inf", or "none" for logical nodes. Unknown fields and duplicate ids are
rejected so malformed models fail loudly instead of analysing garbage.
"""

from __future__ import annotations

import json
from typing import Any

from .costs import Cost, CostError
from .graph import AndOrGraph, GraphError, Node, NodeKind

_NODE_TYPES = {
    "sensor": NodeKind.SENSOR,
    "actuator": NodeKind.ACTUATOR,
    "agent": NodeKind.AGENT,
    "and": NodeKind.AND,
    "or": NodeKind.OR,
}
_TYPE_NAMES = {v: k for k, v in _NODE_TYPES.items()}
_TYPE_NAMES[NodeKind.SOURCE] = "source"


class FormatError(ValueError):
    """Raised when a document does not match the expected shape."""


def _require_keys(obj: dict, allowed: set[str], required: set[str], where: str) -> None:
    unknown = set(obj) - allowed
    if unknown:
        raise FormatError(f"unknown field(s) {sorted(unknown)} in {where}")
    missing = required - set(obj)
    if missing:
        raise FormatError(f"missing field(s) {sorted(missing)} in {where}")


def parse_graph_document(doc: Any) -> AndOrGraph:
    """Build a graph from an already-decoded JSON document."""
    if not isinstance(doc, dict):
        raise FormatError("document root must be a JSON object")
    _require_keys(doc, {"graph"}, {"graph"}, "document root")
    body = doc["graph"]
    if not isinstance(body, dict):
        raise FormatError('"graph" must be a JSON object')
    _require_keys(body, {"target", "nodes", "edges"}, {"target", "nodes", "edges"}, '"graph"')
    if not isinstance(body["nodes"], list) or not isinstance(body["edges"], list):
        raise FormatError('"nodes" and "edges" must be arrays')
    target = body["target"]
    if not isinstance(target, str) or not target:
        raise FormatError('"target" must be a nonempty node id string')

    nodes: list[Node] = []
    seen: set[str] = set()
    for i, entry in enumerate(body["nodes"]):
        if not isinstance(entry, dict):
            raise FormatError(f"node #{i} must be an object")
        _require_keys(entry, {"id", "type", "value"}, {"id", "type", "value"}, f"node #{i}")
        nid, ntype, value = entry["id"], entry["type"], entry["value"]
        if not isinstance(nid, str) or not nid:
            raise FormatError(f"node #{i} id must be a nonempty string")
        if nid in seen:
            raise FormatError(f"duplicate node id {nid!r}")
        seen.add(nid)
        if ntype not in _NODE_TYPES:
            raise FormatError(f"node {nid!r} has unknown type {ntype!r}")
        kind = _NODE_TYPES[ntype]
        if not isinstance(value, str):
            raise FormatError(f"node {nid!r} value must be a string")
        if kind.is_logical:
            if value != "none":
                raise FormatError(f'logical node {nid!r} must have value "none"')
            cost = None
        else:
            if value == "none":
                raise FormatError(f"atomic node {nid!r} requires a cost value")
            try:
                cost = Cost.parse(value)
            except CostError as exc:
                raise FormatError(f"node {nid!r}: {exc}") from exc
        nodes.append(Node(nid, kind, cost))

    edges: list[tuple[str, str]] = []
    edge_seen: set[tuple[str, str]] = set()
    for i, entry in enumerate(body["edges"]):
        if not isinstance(entry, dict):
            raise FormatError(f"edge #{i} must be an object")
        _require_keys(entry, {"source", "target"}, {"source", "target"}, f"edge #{i}")
        src, tgt = entry["source"], entry["target"]
        if not isinstance(src, str) or not isinstance(tgt, str):
            raise FormatError(f"edge #{i} endpoints must be node id strings")
        if src not in seen or tgt not in seen:
            raise FormatError(f"edge #{i} ({src!r} -> {tgt!r}) names an unknown node")
        if (src, tgt) in edge_seen:
            raise FormatError(f"duplicate edge ({src!r} -> {tgt!r})")
        edge_seen.add((src, tgt))
        edges.append((src, tgt))

    try:
        return AndOrGraph(nodes, edges, target)
    except GraphError as exc:
        raise FormatError(str(exc)) from exc


def loads_graph(text: str) -> AndOrGraph:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from exc
    return parse_graph_document(doc)


def load_graph(path) -> AndOrGraph:
    with open(path, "r", encoding="utf-8") as fh:
        return loads_graph(fh.read())


def node_entry(node: Node) -> dict:
    value = "none" if node.cost is None else node.cost.text()
    return {"id": node.id, "type": _TYPE_NAMES[node.kind], "value": value}


def graph_document(graph: AndOrGraph) -> dict:
    """Serialize back to the input shape (source nodes included if present)."""
    return {
        "graph": {
            "target": graph.target,
            "nodes": [node_entry(n) for n in graph.nodes()],
            "edges": [{"source": u, "target": v} for u, v in sorted(graph.edges)],
        }
    }


def solution_document(graph: AndOrGraph, cut_node_ids, cut_cost: Cost) -> dict:
    """Output shape: the original graph object plus the computed cut."""
    doc = graph_document(graph)
    doc["cut"] = {
        "nodes": [node_entry(graph.node(nid)) for nid in sorted(cut_node_ids)],
        "cost": cut_cost.json_number(),
    }
    return doc


def dumps_document(doc: dict) -> str:
    return json.dumps(doc, indent=4) + "\n"
