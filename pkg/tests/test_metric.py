import json

import pytest

from conftest import exhaustive_cut_oracle

from criticut.costs import Cost
from criticut.genbench import CompositionConfig, generate
from criticut.graph import AndOrGraph, Node, NodeKind
from criticut.metric import (
    MetricError,
    UndisruptableError,
    analyze,
    cut_diagnostics,
    kappa,
    mu,
    render_report_text,
    solution_document,
    verify_cut,
)

GOLDEN_FORMULA = "c1 & ( d & ( ( ( a & s ) & ( b & s ) ) | ( ( b & s ) & ( c & s ) ) ) )"


def test_mu_golden(example_graph):
    cut = mu(example_graph)
    assert cut.nodes == ("a", "c")
    assert cut.cost == Cost.parse("4")
    assert cut.cardinality == 2
    assert not cut.target_only


def test_kappa_golden(example_graph):
    assert kappa(example_graph) == Cost.parse("4")


def test_cost_variation(example_graph):
    g = example_graph.with_costs({"b": Cost.parse("3.2")})
    cut = mu(g)
    assert cut.nodes == ("b",)
    assert cut.cost == Cost.parse("3.2")


def test_wtn_basic_scenario(wtn_basic_graph):
    cut = mu(wtn_basic_graph)
    assert cut.nodes == ("s3",)
    assert cut.cost == Cost.parse("5")


def test_cycle_scenario(cycle_graph):
    cut = mu(cycle_graph)
    assert cut.nodes == ("a",)
    assert cut.cost == Cost.parse("4")
    oracle = exhaustive_cut_oracle(cycle_graph)
    assert oracle == (4000, 1, ("a",))


def test_cycle_collapse_counterexample(cycle_graph):
    # cheapest member of the cycle is c (cost 3), but {c} does not disable c1
    members = {"a": Cost.parse("4"), "b": Cost.parse("5"), "c": Cost.parse("3")}
    cheapest = min(members, key=lambda n: members[n])
    assert cheapest == "c"
    assert verify_cut(cycle_graph, "c1", {"c"}) is False
    assert verify_cut(cycle_graph, "c1", {"a"}) is True
    assert mu(cycle_graph).cost < Cost.parse("5")


def test_unit_costs_minimum_node_count(example_graph):
    unit = {n: Cost.parse("1") for n in ["a", "b", "c", "d"]}
    g = example_graph.with_costs(unit)
    cut = mu(g)
    assert cut.cost == Cost.parse("1")
    assert cut.nodes == ("b",)  # b alone starves both joint conditions
    assert exhaustive_cut_oracle(g) == (1000, 1, ("b",))


def test_verify_cut_golden(example_graph):
    assert verify_cut(example_graph, "c1", {"a", "c"}) is True
    assert verify_cut(example_graph, "c1", {"c"}) is False
    assert verify_cut(example_graph, "c1", {"c1"}) is True  # the target itself
    with pytest.raises(MetricError, match="logical"):
        verify_cut(example_graph, "c1", {"or-d"})


def test_cut_diagnostics_reports_wcc(example_graph):
    diag = cut_diagnostics(example_graph, "c1", {"a", "c"})
    assert diag["disables_target"] is True
    assert diag["target_removed"] is True
    # removal propagation leaves {s, b} connected: the wcc view alone would
    # not certify this (correct) cut, which is why verification is logical
    assert diag["wcc_after_removal"] == 1


def test_single_node_graph_target_only():
    g = AndOrGraph([Node("t", NodeKind.ACTUATOR, Cost.parse("7"))], [], "t")
    cut = mu(g)
    assert cut.nodes == ("t",)
    assert cut.target_only
    assert cut.cost == Cost.parse("7")


def test_every_cut_verifies_and_is_irredundant():
    for seed in range(25):
        graph = generate(5 + seed % 9, CompositionConfig(60, 20, 20), seed=seed)
        cut = mu(graph)
        assert verify_cut(graph, None, set(cut.nodes)) is True
        for nid in cut.nodes:
            reduced = set(cut.nodes) - {nid}
            if reduced:
                assert verify_cut(graph, None, reduced) is False


def test_cost_scaling_stability(example_graph):
    base = mu(example_graph)
    scaled_costs = {
        name: cost.scaled(7)
        for name, cost in example_graph.costs().items()
        if not cost.is_infinite
    }
    scaled = mu(example_graph.with_costs(scaled_costs))
    assert scaled.nodes == base.nodes
    assert scaled.cost.milli == base.cost.milli * 7


def test_undisruptable_target(example_graph):
    frozen = {n: Cost.parse("inf") for n in ["a", "b", "c", "d"]}
    with pytest.raises(UndisruptableError, match="cannot be disabled"):
        mu(example_graph.with_costs(frozen))


def test_analyze_report(example_graph):
    report = analyze(example_graph)
    assert report.cut.nodes == ("a", "c")
    assert report.kappa == report.cut.cost == Cost.parse("4")
    assert report.formula_text == GOLDEN_FORMULA
    assert report.objective_text == "~( " + GOLDEN_FORMULA + " )"
    assert report.cnf_variables > 6
    assert report.cnf_clauses > 0
    assert report.transformation_ms >= 0.0
    assert report.solve_ms >= 0.0


def test_analyze_on_generated_thousand_node_graph():
    graph = generate(1000, CompositionConfig(60, 20, 20), seed=123)
    report = analyze(graph)
    assert report.cut.nodes
    assert verify_cut(graph, None, set(report.cut.nodes))


def test_report_text_layout(example_graph):
    report = analyze(example_graph)
    text = render_report_text(report, example_graph)
    lines = text.splitlines()
    assert lines[0] == "Logical formula: "
    assert lines[1] == GOLDEN_FORMULA
    assert "CUT cost: 4.0" in lines
    assert "CUT solution: (a,2); (c,2); " in lines
    assert "### BEST solution found: " in lines
    assert "=== Security Metric ===" in lines


def test_report_text_precision(example_graph):
    report = analyze(example_graph)
    text = render_report_text(report, example_graph, precision=2)
    assert "CUT cost: 4.00" in text


def test_solution_document_shape(example_graph):
    report = analyze(example_graph)
    doc = solution_document(example_graph, report)
    assert set(doc) == {"graph", "cut"}
    assert doc["cut"]["cost"] == 4.0
    assert doc["cut"]["nodes"] == [
        {"id": "a", "type": "sensor", "value": "2"},
        {"id": "c", "type": "sensor", "value": "2"},
    ]
    # the original graph travels unchanged (no artificial source inside)
    ids = {n["id"] for n in doc["graph"]["nodes"]}
    assert "s" not in ids
    json.dumps(doc)  # serializable


def test_mu_with_cost_override_map(example_graph):
    cut = mu(example_graph, costs={"b": Cost.parse("0.5")})
    assert cut.nodes == ("b",)
    assert cut.cost == Cost.parse("0.5")
    with pytest.raises(MetricError, match="unknown node"):
        mu(example_graph, costs={"nope": Cost.parse("1")})
