"""AND/OR dependency graph model.

Nodes are either atomic components (sensors, actuators, software agents, plus
the auto-inserted artificial source) carrying an attacker cost, or logical
AND/OR connectors. Graphs are immutable after construction; every operation
returns a new graph, so values can be shared freely across analyses.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from enum import Enum

from .costs import Cost

SOURCE_ID = "s"


class GraphError(ValueError):
    """Raised for operations on ids or structures the graph does not have."""


class NodeKind(Enum):
    SENSOR = "sensor"
    ACTUATOR = "actuator"
    AGENT = "agent"
    AND = "and"
    OR = "or"
    SOURCE = "source"

    @property
    def is_atomic(self) -> bool:
        return self not in (NodeKind.AND, NodeKind.OR)

    @property
    def is_logical(self) -> bool:
        return not self.is_atomic


@dataclass(frozen=True)
class Node:
    id: str
    kind: NodeKind
    cost: Cost | None = None

    def __post_init__(self) -> None:
        if not self.id:
            raise GraphError("node id must be a nonempty string")
        if self.kind.is_atomic and self.cost is None:
            raise GraphError(f"atomic node {self.id!r} requires a cost")
        if self.kind.is_logical and self.cost is not None:
            raise GraphError(f"logical node {self.id!r} must not carry a cost")


class AndOrGraph:
    """Immutable directed graph with sorted, deterministic adjacency."""

    def __init__(self, nodes, edges, target: str | None):
        node_map: dict[str, Node] = {}
        for node in nodes:
            if node.id in node_map:
                raise GraphError(f"duplicate node id {node.id!r}")
            node_map[node.id] = node
        edge_set: set[tuple[str, str]] = set()
        preds: dict[str, list[str]] = {nid: [] for nid in node_map}
        succs: dict[str, list[str]] = {nid: [] for nid in node_map}
        for src, tgt in edges:
            if (src, tgt) in edge_set:
                raise GraphError(f"duplicate edge ({src!r}, {tgt!r})")
            edge_set.add((src, tgt))
            if src in preds and tgt in preds:
                preds[tgt].append(src)
                succs[src].append(tgt)
        self._nodes = node_map
        self._edges = frozenset(edge_set)
        self._preds = {nid: tuple(sorted(ps)) for nid, ps in preds.items()}
        self._succs = {nid: tuple(sorted(ss)) for nid, ss in succs.items()}
        self.target = target

    @property
    def node_ids(self) -> tuple[str, ...]:
        return tuple(sorted(self._nodes))

    @property
    def edges(self) -> frozenset[tuple[str, str]]:
        return self._edges

    def __contains__(self, node_id: str) -> bool:
        return node_id in self._nodes

    def __len__(self) -> int:
        return len(self._nodes)

    def node(self, node_id: str) -> Node:
        try:
            return self._nodes[node_id]
        except KeyError:
            raise GraphError(f"unknown node {node_id!r}") from None

    def nodes(self):
        return (self._nodes[nid] for nid in self.node_ids)

    def predecessors(self, node_id: str) -> tuple[str, ...]:
        return self._preds[node_id]

    def successors(self, node_id: str) -> tuple[str, ...]:
        return self._succs[node_id]

    def in_degree(self, node_id: str) -> int:
        return len(self._preds[node_id])

    def out_degree(self, node_id: str) -> int:
        return len(self._succs[node_id])

    def atomic_ids(self) -> tuple[str, ...]:
        return tuple(nid for nid in self.node_ids if self._nodes[nid].kind.is_atomic)

    def roots(self) -> tuple[str, ...]:
        """Ids of nodes with no incoming edges, sorted."""
        return tuple(nid for nid in self.node_ids if not self._preds[nid])

    def has_source(self) -> bool:
        return any(n.kind is NodeKind.SOURCE for n in self._nodes.values())

    def costs(self) -> dict[str, Cost]:
        return {n.id: n.cost for n in self._nodes.values() if n.kind.is_atomic}

    def with_costs(self, overrides: dict[str, Cost]) -> "AndOrGraph":
        """Copy of the graph with some atomic costs replaced."""
        for nid in overrides:
            if nid not in self._nodes:
                raise GraphError(f"cost override names unknown node {nid!r}")
            if self._nodes[nid].kind.is_logical:
                raise GraphError(f"cost override targets logical node {nid!r}")
        nodes = [
            Node(n.id, n.kind, overrides.get(n.id, n.cost)) if n.kind.is_atomic else n
            for n in self._nodes.values()
        ]
        return AndOrGraph(nodes, self._edges, self.target)


def validate(graph: AndOrGraph) -> list[str]:
    """Check every structural invariant; returns one message per violation.

    Violations are data, not failures: an empty list means the graph is valid.
    """
    violations: list[str] = []
    sources = [n.id for n in graph.nodes() if n.kind is NodeKind.SOURCE]
    if len(sources) > 1:
        violations.append(f"at most one source node allowed, found {sorted(sources)}")
    augmented = bool(sources)

    for src, tgt in sorted(graph.edges):
        if src not in graph:
            violations.append(f"edge ({src!r}, {tgt!r}) names unknown node {src!r}")
        if tgt not in graph:
            violations.append(f"edge ({src!r}, {tgt!r}) names unknown node {tgt!r}")

    for node in graph.nodes():
        ind = graph.in_degree(node.id)
        outd = graph.out_degree(node.id)
        if node.kind is NodeKind.ACTUATOR and outd != 0:
            violations.append(
                f"out-degree 0 for actuators violated by {node.id!r} (out-degree {outd})"
            )
        if node.kind.is_logical:
            if ind < 2:
                violations.append(
                    f"in-degree >= 2 for logical nodes violated by {node.id!r} (in-degree {ind})"
                )
            if outd < 1:
                violations.append(
                    f"out-degree >= 1 for logical nodes violated by {node.id!r}"
                )
        elif node.kind is NodeKind.SOURCE:
            if ind != 0:
                violations.append(f"source node {node.id!r} must have in-degree 0")
        else:
            if augmented:
                if ind != 1:
                    violations.append(
                        f"in-degree 1 for atomic nodes violated by {node.id!r} "
                        f"(in-degree {ind} after source insertion)"
                    )
            elif ind > 1:
                violations.append(
                    f"in-degree <= 1 for atomic nodes violated by {node.id!r} (in-degree {ind})"
                )

    for src, tgt in sorted(graph.edges):
        if src in graph and tgt in graph:
            if graph.node(src).kind.is_logical and graph.node(tgt).kind is NodeKind.SENSOR:
                violations.append(f"edge from logical node {src!r} enters sensor {tgt!r}")
            if graph.node(src).kind is NodeKind.ACTUATOR and graph.node(tgt).kind.is_logical:
                violations.append(f"edge leaves actuator {src!r} into logical node {tgt!r}")

    if graph.target is None:
        violations.append("graph has no target node")
    elif graph.target not in graph:
        violations.append(f"target {graph.target!r} is not a node of the graph")
    elif graph.node(graph.target).kind.is_logical:
        violations.append(f"target {graph.target!r} must be an atomic node")
    return violations


def add_artificial_source(graph: AndOrGraph) -> AndOrGraph:
    """Link every zero-in-degree node to one artificial source node.

    Returns the graph unchanged when it already has a single origin (or none).
    The source is infinitely costly: it is not a physical component and must
    never be part of a cut.
    """
    roots = graph.roots()
    if len(roots) <= 1:
        return graph
    source_id = SOURCE_ID
    suffix = 0
    while source_id in graph:
        suffix += 1
        source_id = f"{SOURCE_ID}_{suffix}"
    nodes = list(graph.nodes()) + [Node(source_id, NodeKind.SOURCE, Cost.infinite())]
    edges = set(graph.edges) | {(source_id, r) for r in roots}
    return AndOrGraph(nodes, edges, graph.target)


def remove_nodes(graph: AndOrGraph, removed) -> AndOrGraph:
    """Delete nodes and everything that logically collapses with them.

    Worklist rules: deleting ``n`` also queues each successor that is atomic,
    an AND node, or an OR node whose in-degree (at that moment) is exactly 1.
    """
    for nid in removed:
        if nid not in graph:
            raise GraphError(f"cannot remove unknown node {nid!r}")
    alive = {nid: True for nid in graph.node_ids}
    in_deg = {nid: graph.in_degree(nid) for nid in graph.node_ids}
    queue = deque(sorted(set(removed)))
    queued = set(queue)
    while queue:
        n = queue.popleft()
        if not alive[n]:
            continue
        for x in graph.successors(n):
            if not alive[x]:
                continue
            kind = graph.node(x).kind
            if kind.is_atomic or kind is NodeKind.AND or (kind is NodeKind.OR and in_deg[x] == 1):
                if x not in queued:
                    queue.append(x)
                    queued.add(x)
        alive[n] = False
        for x in graph.successors(n):
            if alive[x]:
                in_deg[x] -= 1
    nodes = [node for node in graph.nodes() if alive[node.id]]
    edges = [(u, v) for (u, v) in graph.edges if alive[u] and alive[v]]
    target = graph.target if graph.target is not None and alive.get(graph.target) else None
    return AndOrGraph(nodes, edges, target)


def wcc(graph: AndOrGraph) -> int:
    """Number of weakly connected components (edge orientation ignored)."""
    parent = {nid: nid for nid in graph.node_ids}

    def find(x: str) -> str:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for u, v in graph.edges:
        ru, rv = find(u), find(v)
        if ru != rv:
            parent[ru] = rv
    return len({find(nid) for nid in graph.node_ids})


def depth(graph: AndOrGraph, node_id: str, count_logical: bool = True) -> int:
    """Shortest directed path length from the unique root to ``node_id``.

    With ``count_logical=False``, hops into logical connectors are free, so
    the depth counts only atomic components along the path.
    """
    if node_id not in graph:
        raise GraphError(f"unknown node {node_id!r}")
    roots = graph.roots()
    if len(roots) != 1:
        raise GraphError(
            f"depth requires a unique zero-in-degree node, found {len(roots)}"
        )
    root = roots[0]
    dist = {root: 0}
    queue = deque([root])
    while queue:
        u = queue.popleft()
        if u == node_id:
            return dist[u]
        for v in graph.successors(u):
            step = 1
            if not count_logical and graph.node(v).kind.is_logical:
                step = 0
            nd = dist[u] + step
            if v not in dist or nd < dist[v]:
                dist[v] = nd
                if step == 0:
                    queue.appendleft(v)
                else:
                    queue.append(v)
    if node_id in dist:
        return dist[node_id]
    raise GraphError(f"node {node_id!r} is unreachable from source {root!r}")
