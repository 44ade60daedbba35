"""End-to-end pipeline: graph -> formula -> negation -> CNF -> optimum cut.

The headline numbers: the cut is the minimum-cost set of atomic components
whose compromise disables the target, and its numeric value is that cost.
Verification is logical: a candidate set is a cut when falsifying exactly its
members makes the target's operating condition false. (The node-removal view
is reported alongside for diagnostics, but removal propagation can leave a
connected remnant even for a correct cut, so it is not the arbiter.)
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Mapping

from . import graphjson
from .cnf import tseitin
from .costs import Cost, total
from .formula import atoms, evaluate, form, negate, render
from .graph import AndOrGraph, NodeKind, add_artificial_source, remove_nodes, wcc
from .maxsat import build_instance, solve


class MetricError(ValueError):
    pass


class UndisruptableError(MetricError):
    """Every attack path is hard-blocked by infinite costs."""

    def __init__(self) -> None:
        super().__init__("target cannot be disabled")


@dataclass(frozen=True)
class CutSolution:
    nodes: tuple[str, ...]  # sorted atomic node ids
    cost: Cost
    cardinality: int
    target_only: bool

    def as_dict(self) -> dict:
        return {
            "nodes": list(self.nodes),
            "cost": self.cost.json_number(),
            "cardinality": self.cardinality,
            "targetOnly": self.target_only,
        }


@dataclass(frozen=True)
class MetricReport:
    cut: CutSolution
    kappa: Cost
    formula_text: str
    objective_text: str
    cnf_variables: int
    cnf_clauses: int
    transformation_ms: float
    solve_ms: float


def _prepare(graph: AndOrGraph, target: str | None):
    t = target if target is not None else graph.target
    if t is None:
        raise MetricError("no target node given")
    if t not in graph:
        raise MetricError(f"target {t!r} is not a node of the graph")
    if graph.node(t).kind.is_logical:
        raise MetricError(f"target {t!r} must be an atomic node")
    return add_artificial_source(graph), t


def _run_pipeline(graph: AndOrGraph, target: str | None, costs: Mapping[str, Cost] | None):
    augmented, t = _prepare(graph, target)

    started = time.perf_counter()
    objective = negate(form(augmented, t))
    cnf = tseitin(objective)
    transformation_ms = (time.perf_counter() - started) * 1000.0

    cost_map = dict(augmented.costs())
    if costs is not None:
        for name, value in costs.items():
            if name not in cost_map:
                raise MetricError(f"cost override names unknown node {name!r}")
            # The artificial source is not a physical component; its cost is
            # pinned infinite no matter what a cost scheme assigns to it.
            if augmented.node(name).kind is NodeKind.SOURCE:
                continue
            cost_map[name] = value

    started = time.perf_counter()
    instance = build_instance(cnf, cost_map)
    solution = solve(instance)
    solve_ms = (time.perf_counter() - started) * 1000.0

    if solution is None:
        raise UndisruptableError()
    names = solution.falsified_names(instance)
    cut = CutSolution(
        nodes=names,
        cost=total(cost_map[name] for name in names),
        cardinality=solution.cardinality,
        target_only=(names == (t,)),
    )
    return cut, objective, cnf, transformation_ms, solve_ms


def mu(graph: AndOrGraph, target: str | None = None, costs: Mapping[str, Cost] | None = None) -> CutSolution:
    """Minimum-cost set of atomic nodes whose compromise disables the target."""
    cut, _, _, _, _ = _run_pipeline(graph, target, costs)
    return cut


def kappa(graph: AndOrGraph, target: str | None = None, costs: Mapping[str, Cost] | None = None) -> Cost:
    """Numeric security level: the total cost of the minimal cut."""
    return mu(graph, target, costs).cost


def verify_cut(graph: AndOrGraph, target: str | None, cut_nodes) -> bool:
    """A set cuts the target when it is the target itself, or when falsifying
    exactly its members makes the target's operating sentence false."""
    augmented, t = _prepare(graph, target)
    cut_set = set(cut_nodes)
    for nid in cut_set:
        if nid not in augmented:
            raise MetricError(f"cut names unknown node {nid!r}")
        if augmented.node(nid).kind.is_logical:
            raise MetricError(f"cut names logical node {nid!r}")
    if cut_set == {t}:
        return True
    sentence = form(augmented, t)
    assignment = {name: name not in cut_set for name in atoms(sentence)}
    return not evaluate(sentence, assignment)


def cut_diagnostics(graph: AndOrGraph, target: str | None, cut_nodes) -> dict:
    """Logical verdict plus the removal-propagation view of the same set."""
    augmented, t = _prepare(graph, target)
    survivors = remove_nodes(augmented, set(cut_nodes))
    return {
        "disables_target": verify_cut(graph, target, cut_nodes),
        "target_removed": t not in survivors,
        "wcc_after_removal": wcc(survivors),
    }


def analyze(
    graph: AndOrGraph,
    target: str | None = None,
    costs: Mapping[str, Cost] | None = None,
) -> MetricReport:
    """Full report: cut, metric value, formula texts, CNF stats, timings."""
    cut, objective, cnf, transformation_ms, solve_ms = _run_pipeline(graph, target, costs)
    formula = objective.operand  # the positive sentence the objective negates
    return MetricReport(
        cut=cut,
        kappa=cut.cost,
        formula_text=render(formula),
        objective_text=render(objective),
        cnf_variables=cnf.num_vars,
        cnf_clauses=cnf.num_clauses,
        transformation_ms=transformation_ms,
        solve_ms=solve_ms,
    )


def render_report_text(
    report: MetricReport,
    graph: AndOrGraph,
    costs: Mapping[str, Cost] | None = None,
    precision: int | None = None,
) -> str:
    """Console report mirroring the tool's section layout."""
    cost_map = dict(graph.costs())
    if costs is not None:
        for name, value in costs.items():
            if name in cost_map:
                cost_map[name] = value
    entries = "".join(
        f"({name},{cost_map[name].text()}); " for name in report.cut.nodes
    )
    lines = [
        "Logical formula: ",
        report.formula_text,
        "",
        "Objective: ",
        report.objective_text,
        "",
        "Tseitin CNF sentence (DIMACS): ",
        f"- Number of variables: {report.cnf_variables}",
        f"- Number of clauses: {report.cnf_clauses}",
        "",
        "==================================",
        "### BEST solution found: ",
        "=== Security Metric ===",
        f"CUT cost: {report.kappa.display(precision)}",
        f"CUT solution: {entries}",
    ]
    return "\n".join(lines) + "\n"


def solution_document(graph: AndOrGraph, report: MetricReport) -> dict:
    """Output JSON: the original graph object plus the cut."""
    return graphjson.solution_document(graph, report.cut.nodes, report.cut.cost)


def cut_entries(
    graph: AndOrGraph, report: MetricReport, costs: Mapping[str, Cost] | None = None
) -> list[dict]:
    """Cut node objects in the file-format shape, with effective costs."""
    entries = []
    for nid in report.cut.nodes:
        entry = graphjson.node_entry(graph.node(nid))
        if costs is not None and nid in costs:
            entry["value"] = costs[nid].text()
        entries.append(entry)
    return entries


def report_dict(
    report: MetricReport,
    graph: AndOrGraph,
    costs: Mapping[str, Cost] | None = None,
) -> dict:
    return {
        "cut": {
            "nodes": cut_entries(graph, report, costs),
            "cost": report.cut.cost.json_number(),
        },
        "kappa": report.kappa.json_number(),
        "cardinality": report.cut.cardinality,
        "targetOnly": report.cut.target_only,
        "formulaText": report.formula_text,
        "objectiveText": report.objective_text,
        "cnfStats": {
            "variables": report.cnf_variables,
            "clauses": report.cnf_clauses,
        },
        "timings": {
            "transformationMs": report.transformation_ms,
            "solveMs": report.solve_ms,
        },
    }
