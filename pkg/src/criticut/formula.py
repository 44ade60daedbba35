"""Propositional formulas describing when a target component operates.

The builder walks the graph backwards from a node, joining each atomic node
conjunctively with its dependency and expanding AND/OR connectors over their
unvisited predecessors. Cycles terminate because a node already on the current
exploration path re-appears as a bare atom instead of being expanded again.

All walks are iterative: dependency chains in large models are far deeper than
any sane recursion limit.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping

from .graph import AndOrGraph, GraphError, NodeKind


class Formula:
    __slots__ = ()


@dataclass(frozen=True)
class Atom(Formula):
    __slots__ = ("name",)
    name: str


@dataclass(frozen=True)
class Not(Formula):
    __slots__ = ("operand",)
    operand: Formula


class _ConstTrue(Formula):
    __slots__ = ()

    def __repr__(self) -> str:
        return "TRUE"


TRUE = _ConstTrue()


@dataclass(frozen=True)
class And(Formula):
    __slots__ = ("operands",)
    operands: tuple[Formula, ...]

    def __post_init__(self) -> None:
        if len(self.operands) < 1:
            raise ValueError("And requires at least one operand")


@dataclass(frozen=True)
class Or(Formula):
    __slots__ = ("operands",)
    operands: tuple[Formula, ...]

    def __post_init__(self) -> None:
        if len(self.operands) < 2:
            raise ValueError("Or requires at least two operands")


class EvaluationError(ValueError):
    """Raised when an assignment does not cover a formula's atoms."""


def _combine(kind: NodeKind, subs: list[Formula]) -> Formula:
    if not subs:
        return TRUE
    if len(subs) == 1:
        return subs[0]
    if kind is NodeKind.AND:
        return And(tuple(subs))
    return Or(tuple(subs))


def get_sentence(graph: AndOrGraph, start: str, visited: Iterable[str]) -> Formula:
    """Sentence stating the conditions under which ``start`` operates.

    ``visited`` seeds the exploration path; nodes already on the path are not
    expanded again. Predecessors are processed in sorted-id order so the
    output is reproducible.
    """
    if start not in graph:
        raise GraphError(f"unknown node {start!r}")
    on_path = set(visited)
    results: list[Formula] = []
    # Work stack interleaves visits with path bookkeeping and combination
    # steps; sibling subtrees therefore see identical path sets.
    work: list[tuple] = [("visit", start)]
    while work:
        item = work.pop()
        tag = item[0]
        if tag == "visit":
            n = item[1]
            added = n not in on_path
            if added:
                on_path.add(n)
            node = graph.node(n)
            if node.kind.is_atomic:
                preds = graph.predecessors(n)
                if len(preds) > 1:
                    raise GraphError(
                        f"atomic node {n!r} has {len(preds)} predecessors; expected at most one"
                    )
                x = preds[0] if preds else None
                # The visited test uses the path as it was before this node
                # was marked, mirroring the marking order of the traversal.
                if x is None or (x in on_path and (x != n or not added)):
                    results.append(Atom(n))
                    if added:
                        on_path.remove(n)
                else:
                    work.append(("exit", n, added))
                    work.append(("and_with", n))
                    work.append(("visit", x))
            else:
                pending = [p for p in graph.predecessors(n) if p not in on_path]
                if not pending:
                    results.append(TRUE)
                    if added:
                        on_path.remove(n)
                else:
                    work.append(("exit", n, added))
                    work.append(("combine", node.kind, len(pending)))
                    for p in reversed(pending):
                        work.append(("visit", p))
        elif tag == "and_with":
            results[-1] = And((Atom(item[1]), results[-1]))
        elif tag == "combine":
            _, kind, count = item
            subs = results[len(results) - count :]
            del results[len(results) - count :]
            results.append(_combine(kind, subs))
        else:  # exit
            _, n, added = item
            if added:
                on_path.remove(n)
    (result,) = results
    return result


def get_multi_sentence(
    graph: AndOrGraph, nodes: list[str], op: NodeKind, visited: Iterable[str]
) -> Formula:
    """Join the sentences of pre-filtered nodes with the given connector.

    An empty node list is vacuously satisfied; a single node passes through
    without a wrapping operator.
    """
    if op not in (NodeKind.AND, NodeKind.OR):
        raise ValueError(f"operator must be AND or OR, got {op}")
    subs = [get_sentence(graph, n, visited) for n in nodes]
    return _combine(op, subs)


def form(graph: AndOrGraph, target: str) -> Formula:
    """Sentence for the graph's target; the root of the whole analysis."""
    if target not in graph:
        raise GraphError(f"unknown target {target!r}")
    if graph.node(target).kind.is_logical:
        raise GraphError(f"target {target!r} must be an atomic node")
    return get_sentence(graph, target, set())


def negate(f: Formula) -> Formula:
    return Not(f)


def atoms(f: Formula) -> set[str]:
    found: set[str] = set()
    stack = [f]
    while stack:
        node = stack.pop()
        if isinstance(node, Atom):
            found.add(node.name)
        elif isinstance(node, Not):
            stack.append(node.operand)
        elif isinstance(node, (And, Or)):
            stack.extend(node.operands)
    return found


def evaluate(f: Formula, assignment: Mapping[str, bool]) -> bool:
    """Truth-functional evaluation under a total assignment."""
    values: list[bool] = []
    work: list[tuple] = [("eval", f)]
    while work:
        tag, node = work.pop()
        if tag == "eval":
            if isinstance(node, Atom):
                try:
                    values.append(assignment[node.name])
                except KeyError:
                    raise EvaluationError(f"assignment is missing atom {node.name!r}") from None
            elif node is TRUE:
                values.append(True)
            elif isinstance(node, Not):
                work.append(("not", node))
                work.append(("eval", node.operand))
            else:
                work.append(("join", node))
                for op in node.operands:
                    work.append(("eval", op))
        elif tag == "not":
            values[-1] = not values[-1]
        else:  # join
            count = len(node.operands)
            group = values[len(values) - count :]
            del values[len(values) - count :]
            values.append(all(group) if isinstance(node, And) else any(group))
    (result,) = values
    return result


def render(f: Formula) -> str:
    """Print with "&", "|", "~" and spaced parentheses.

    Composite operands are parenthesized; the outermost level is not, matching
    the tool's report lines such as ``c1 & ( d & ... )``.
    """
    parts: list[str] = []
    work: list[tuple] = [("node", f, True)]
    while work:
        item = work.pop()
        tag = item[0]
        if tag == "text":
            parts.append(item[1])
            continue
        _, node, top = item
        if isinstance(node, Atom):
            parts.append(node.name)
        elif node is TRUE:
            parts.append("true")
        elif isinstance(node, Not):
            parts.append("~")
            work.append(("node", node.operand, False))
        else:
            sep = " & " if isinstance(node, And) else " | "
            if not top:
                parts.append("( ")
                work.append(("text", " )"))
            for i, op in enumerate(reversed(node.operands)):
                work.append(("node", op, False))
                if i != len(node.operands) - 1:
                    work.append(("text", sep))
    return "".join(parts)
