import pytest

from criticut.costs import Cost
from criticut.genbench import CompositionConfig, generate
from criticut.graph import AndOrGraph, Node, NodeKind, add_artificial_source
from criticut.hardening import (
    HardeningError,
    MEASURE_WEIGHTS,
    budget_costs,
    harden_iterate,
    parse_measures,
    perimeter_costs,
    score,
)
from criticut.metric import mu

# The published score table: configuration of measures -> total effort.
SCORE_TABLE = [
    (frozenset(), 0),
    (frozenset({"C"}), 1),
    (frozenset({"C", "F"}), 2),
    (frozenset({"C", "LC"}), 3),
    (frozenset({"C", "F", "AS"}), 5),
    (frozenset({"B", "LB", "F"}), 6),
    (frozenset({"B", "LB", "F", "AS"}), 9),
    (frozenset({"C", "LC", "B", "LB", "F"}), 9),
    (frozenset({"C", "LC", "B", "LB", "F", "AS"}), 12),
    (frozenset({"C", "LC", "B", "LB", "F", "AS", "MA"}), 16),
]


@pytest.mark.parametrize("measures,expected", SCORE_TABLE)
def test_score_table(measures, expected):
    assert score(measures) == Cost.of(expected)


def test_score_monotone():
    for measures, _ in SCORE_TABLE:
        for extra in MEASURE_WEIGHTS:
            assert score(measures | {extra}) >= score(measures)


def test_score_rejects_unknown_code():
    with pytest.raises(HardeningError, match="unknown measure"):
        score({"C", "XX"})


def test_parse_measures():
    assert parse_measures("C,F,AS") == frozenset({"C", "F", "AS"})
    assert parse_measures("") == frozenset()
    with pytest.raises(HardeningError):
        parse_measures("C,nope")


# --- perimeter costs ----------------------------------------------------------

def _perimeter_graph():
    # source -> x -> AND(y) -> z -> t, with an extra sensor y feeding the AND
    g = AndOrGraph(
        [
            Node("x", NodeKind.SENSOR, Cost.parse("9")),
            Node("y", NodeKind.SENSOR, Cost.parse("9")),
            Node("g", NodeKind.AND, None),
            Node("z", NodeKind.AGENT, Cost.parse("9")),
            Node("t", NodeKind.ACTUATOR, Cost.parse("inf")),
        ],
        [("x", "g"), ("y", "g"), ("g", "z"), ("z", "t")],
        "t",
    )
    return add_artificial_source(g)


def test_perimeter_costs_assignment():
    g = _perimeter_graph()
    costs = perimeter_costs(g)
    assert costs["s"] == Cost.of(0)
    assert costs["x"] == Cost.of(1)
    assert costs["y"] == Cost.of(1)
    assert costs["z"] == Cost.of(3)  # behind the connector
    assert costs["t"].is_infinite  # infinite target keeps its cost


def test_perimeter_costs_skip_logical_option():
    g = _perimeter_graph()
    costs = perimeter_costs(g, count_logical=False)
    assert costs["z"] == Cost.of(2)


def test_perimeter_costs_feed_the_metric():
    g = _perimeter_graph()
    costs = perimeter_costs(g)
    cut = mu(g, costs=costs)  # the artificial source stays uncompromisable
    assert cut.nodes == ("x",)
    assert cut.cost == Cost.of(1)


# --- iterative hardening -------------------------------------------------------

def test_harden_trace_on_example(example_graph):
    trace = harden_iterate(example_graph)
    summary = [(r.cut_nodes, r.cut_cost.text(), r.terminal) for r in trace.rounds]
    assert summary == [
        (("a", "c"), "4", False),
        (("b",), "5", False),
        (("d",), "10", False),
        (("c1",), "inf", True),
    ]
    assert trace.status == "fully-hardened"
    remediated = [set(r.remediated) for r in trace.rounds[:-1]]
    assert remediated == [{"a", "c"}, {"a", "b", "c"}, {"a", "b", "c", "d"}]
    for earlier, later in zip(remediated, remediated[1:]):
        assert earlier < later


def test_harden_threshold_stops_after_reaching_level(example_graph):
    trace = harden_iterate(example_graph, threshold=Cost.parse("4.5"))
    assert [r.cut_cost.text() for r in trace.rounds] == ["4", "5"]
    assert trace.status == "threshold-reached"


def test_harden_max_rounds(example_graph):
    trace = harden_iterate(example_graph, max_rounds=1)
    assert len(trace.rounds) == 1
    assert trace.rounds[0].cut_nodes == ("a", "c")
    assert trace.status == "max-rounds"


def test_harden_costs_never_decrease_on_random_graphs():
    for seed in range(20):
        graph = generate(6 + seed % 8, CompositionConfig(60, 20, 20), seed=seed)
        trace = harden_iterate(graph)
        finite_rounds = [r for r in trace.rounds if not r.terminal]
        costs = [r.cut_cost for r in finite_rounds]
        for earlier, later in zip(costs, costs[1:]):
            assert not (later < earlier)
        assert len(trace.rounds) <= len(graph.atomic_ids()) + 1


def test_harden_trace_serializes(example_graph):
    import json

    doc = harden_iterate(example_graph).as_dict()
    assert doc["rounds"][0]["cut"] == ["a", "c"]
    assert doc["rounds"][0]["cost"] == 4.0
    assert doc["rounds"][-1]["cost"] == "inf"
    json.dumps(doc)


# --- budget blending -----------------------------------------------------------

def test_budget_alpha_one_returns_original():
    costs = {"x": Cost.parse("5"), "y": Cost.parse("inf")}
    blended = budget_costs(costs, {"x": 3, "y": 1}, alpha=1, beta=0)
    assert blended == costs


def test_budget_beta_one_returns_budgets():
    costs = {"x": Cost.parse("5")}
    blended = budget_costs(costs, {"x": 3}, alpha=0, beta=1)
    assert blended["x"] == Cost.parse("3")


def test_budget_even_blend():
    blended = budget_costs(
        {"x": Cost.parse("5")}, {"x": 3}, alpha="0.5", beta="0.5"
    )
    assert blended["x"] == Cost.parse("4")


def test_budget_infinite_costs_stay_infinite():
    blended = budget_costs(
        {"x": Cost.parse("inf")}, {}, alpha="0.5", beta="0.5"
    )
    assert blended["x"].is_infinite


def test_budget_coefficient_validation():
    with pytest.raises(HardeningError, match="sum to 1"):
        budget_costs({"x": Cost.parse("1")}, {"x": 1}, alpha=0.7, beta=0.7)
    with pytest.raises(HardeningError, match="sum to 1"):
        budget_costs({"x": Cost.parse("1")}, {"x": 1}, alpha=-0.5, beta=1.5)


def test_budget_missing_budget():
    with pytest.raises(HardeningError, match="missing budget"):
        budget_costs({"x": Cost.parse("1")}, {}, alpha=0.5, beta=0.5)


def test_budget_blend_lands_on_milli_grid():
    blended = budget_costs(
        {"x": Cost.parse("1")}, {"x": Cost.parse("2")}, alpha="0.333", beta="0.667"
    )
    # 0.333*1000 + 0.667*2000 = 1667 exactly on the grid
    assert blended["x"].milli == 1667


def test_argmin_preserved_under_uniform_scaling(example_graph):
    base = mu(example_graph)
    finite = {
        n: c.scaled(2) for n, c in example_graph.costs().items() if not c.is_infinite
    }
    doubled = budget_costs(finite, {n: 0 for n in finite}, alpha=1, beta=0)
    cut = mu(example_graph, costs=doubled)
    assert cut.nodes == base.nodes
