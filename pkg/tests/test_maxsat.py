import random

import pytest

from conftest import exhaustive_cut_oracle

from criticut.cnf import emit_wcnf, parse_wcnf, tseitin
from criticut.costs import Cost
from criticut.formula import form, negate
from criticut.genbench import CompositionConfig, generate
from criticut.gatesolver import solve_gates
from criticut.maxsat import (
    MaxsatError,
    WpmsInstance,
    _solve_general,
    brute_force,
    build_instance,
    solve,
)
from criticut.graph import add_artificial_source


def pipeline_instance(graph, target=None, costs=None):
    augmented = add_artificial_source(graph)
    t = target or augmented.target
    cnf = tseitin(negate(form(augmented, t)))
    cost_map = dict(augmented.costs())
    if costs:
        cost_map.update(costs)
    return cnf, build_instance(cnf, cost_map)


def test_build_instance_golden(example_graph):
    cnf, inst = pipeline_instance(example_graph)
    by_name = {inst.name_of(v): w for v, w in inst.soft.items()}
    assert by_name == {"a": 2000, "b": 5000, "c": 2000, "d": 10000}
    forced_names = {inst.name_of(v) for v in inst.forced}
    assert forced_names == {"c1", "s"}
    # forced nodes appear as positive hard units
    units = {cl[0] for cl in inst.hard if len(cl) == 1 and cl[0] > 0}
    assert {cnf.var_map.atom_to_var["c1"], cnf.var_map.atom_to_var["s"]} <= units


def test_build_instance_missing_cost(example_graph):
    cnf, _ = pipeline_instance(example_graph)
    with pytest.raises(MaxsatError, match="missing cost for node 'd'"):
        costs = dict(add_artificial_source(example_graph).costs())
        del costs["d"]
        build_instance(cnf, costs)


def test_build_instance_single_finite_cost(example_graph):
    # freezing everything except one node leaves exactly one soft clause
    frozen = {n: Cost.parse("inf") for n in ["b", "c", "d"]}
    g = example_graph.with_costs(frozen)
    _, inst = pipeline_instance(g)
    assert [inst.name_of(v) for v in inst.soft] == ["a"]


def test_build_instance_rejects_zero_cost(example_graph):
    g = example_graph.with_costs({"a": Cost.parse("0")})
    cnf = tseitin(negate(form(add_artificial_source(g), "c1")))
    with pytest.raises(MaxsatError, match="epsilon|hard|positive"):
        build_instance(cnf, add_artificial_source(g).costs())


def test_solve_golden(example_graph):
    _, inst = pipeline_instance(example_graph)
    sol = solve(inst)
    assert sol.falsified_names(inst) == ("a", "c")
    assert sol.penalty == 4000
    assert sol.cardinality == 2


def test_solve_cost_variation(example_graph):
    g = example_graph.with_costs({"b": Cost.parse("3.2")})
    _, inst = pipeline_instance(g)
    sol = solve(inst)
    assert sol.falsified_names(inst) == ("b",)
    assert sol.penalty == 3200


def test_solve_forced_unit():
    inst = WpmsInstance(hard=[(-1,)], soft={1: 700}, var_map=None, num_vars=1)
    sol = solve(inst)
    assert sol.falsified == {1}
    assert sol.penalty == 700


def test_solve_unsat():
    inst = WpmsInstance(hard=[(1,), (-1,)], soft={}, var_map=None, num_vars=1)
    assert solve(inst) is None


def test_brute_force_matches_examples(example_graph):
    _, inst = pipeline_instance(example_graph)
    bf = brute_force(inst)
    assert bf.falsified_names(inst) == ("a", "c")
    assert bf.penalty == 4000

    g = example_graph.with_costs({"b": Cost.parse("3.2")})
    _, inst2 = pipeline_instance(g)
    assert brute_force(inst2).falsified_names(inst2) == ("b",)

    inst3 = WpmsInstance(hard=[(-1,)], soft={1: 700}, var_map=None, num_vars=1)
    assert brute_force(inst3).falsified == {1}


def test_brute_force_refuses_large_instances():
    inst = WpmsInstance(
        hard=[], soft={v: 1 for v in range(1, 26)}, var_map=None, num_vars=25
    )
    with pytest.raises(MaxsatError, match="24"):
        brute_force(inst)


def _solution_tuple(inst, sol):
    if sol is None:
        return None
    return (sol.penalty, sol.cardinality, sol.falsified_names(inst))


@pytest.mark.parametrize("seed", range(60))
def test_engines_agree_with_brute_force(seed):
    cfg = CompositionConfig(60, 20, 20) if seed % 2 == 0 else CompositionConfig(80, 10, 10)
    size = 4 + seed % 11
    graph = generate(size, cfg, seed=seed)
    if len(graph.atomic_ids()) > 15:
        graph = generate(4, cfg, seed=seed)
    cnf, inst = pipeline_instance(graph)

    gate_sol = solve_gates(inst)
    general_sol = _solve_general(inst)
    oracle_sol = brute_force(inst)
    assert _solution_tuple(inst, gate_sol) == _solution_tuple(inst, oracle_sol)
    assert _solution_tuple(inst, general_sol) == _solution_tuple(inst, oracle_sol)

    # the WCNF round trip drops the gate structure: forces the general engine
    parsed = parse_wcnf(emit_wcnf(inst))
    round_trip = solve(parsed)
    assert (round_trip.penalty, round_trip.cardinality) == (
        oracle_sol.penalty,
        oracle_sol.cardinality,
    )
    assert round_trip.falsified_names(parsed) == oracle_sol.falsified_names(inst)


def test_solution_satisfies_hard_clauses(example_graph):
    _, inst = pipeline_instance(example_graph)
    sol = solve(inst)
    for clause in inst.hard:
        assert any(sol.assignment[abs(l)] == (l > 0) for l in clause)


def test_monotonic_in_weights():
    rng = random.Random(11)
    for seed in range(20):
        graph = generate(10, CompositionConfig(60, 20, 20), seed=seed)
        _, inst = pipeline_instance(graph)
        base = solve(inst).penalty
        if not inst.soft:
            continue
        bumped_var = rng.choice(sorted(inst.soft))
        bumped = WpmsInstance(
            hard=inst.hard,
            soft={**inst.soft, bumped_var: inst.soft[bumped_var] + 1500},
            var_map=inst.var_map,
            num_vars=inst.num_vars,
            gates=inst.gates,
            root_literal=inst.root_literal,
            forced=inst.forced,
        )
        assert solve(bumped).penalty >= base


def test_restriction_soundness():
    for seed in range(20):
        graph = generate(12, CompositionConfig(60, 20, 20), seed=seed)
        _, inst = pipeline_instance(graph)
        sol = solve(inst)
        if not sol.falsified:
            continue
        pinned_var = min(sol.falsified)
        restricted = WpmsInstance(
            hard=inst.hard + [(pinned_var,)],
            soft={v: w for v, w in inst.soft.items() if v != pinned_var},
            var_map=inst.var_map,
            num_vars=inst.num_vars,
            forced=inst.forced | {pinned_var},
        )
        after = solve(restricted)
        assert after is None or after.penalty >= sol.penalty - inst.soft[pinned_var]


def test_tie_breaks_cardinality_then_lex():
    # t depends on an OR of p and q: cuts are {t} (4) or {p, q} (2+2)
    from criticut.graph import AndOrGraph, Node, NodeKind

    def cost(x):
        return Cost.parse(x)

    g = AndOrGraph(
        [
            Node("t", NodeKind.ACTUATOR, cost("4")),
            Node("p", NodeKind.AGENT, cost("2")),
            Node("q", NodeKind.AGENT, cost("2")),
            Node("o", NodeKind.OR),
        ],
        [("p", "o"), ("q", "o"), ("o", "t")],
        "t",
    )
    _, inst = pipeline_instance(g)
    sol = solve(inst)
    assert sol.falsified_names(inst) == ("t",)  # same cost, fewer nodes

    # t depends on an AND of m and k with equal costs: lexicographic winner
    g2 = AndOrGraph(
        [
            Node("t", NodeKind.ACTUATOR, cost("9")),
            Node("m", NodeKind.AGENT, cost("1")),
            Node("k", NodeKind.AGENT, cost("1")),
            Node("g", NodeKind.AND),
        ],
        [("m", "g"), ("k", "g"), ("g", "t")],
        "t",
    )
    _, inst2 = pipeline_instance(g2)
    sol2 = solve(inst2)
    assert sol2.falsified_names(inst2) == ("k",)
    assert brute_force(inst2).falsified_names(inst2) == ("k",)
    assert _solve_general(inst2).falsified_names(inst2) == ("k",)


def test_oracle_matches_graph_subset_oracle(example_graph):
    _, inst = pipeline_instance(example_graph)
    sol = solve(inst)
    oracle = exhaustive_cut_oracle(example_graph)
    assert oracle == (sol.penalty, sol.cardinality, sol.falsified_names(inst))


def _random_monotone_formula(rng, names, depth):
    from criticut.formula import And, Atom, Or

    if depth == 0 or rng.random() < 0.35:
        return Atom(rng.choice(names))
    arity = rng.randint(2, 3)
    operands = tuple(_random_monotone_formula(rng, names, depth - 1) for _ in range(arity))
    return And(operands) if rng.random() < 0.5 else Or(operands)


@pytest.mark.parametrize("seed", range(80))
def test_engines_agree_on_shared_atom_objectives(seed):
    # repeated atoms across branches exercise the conditioning path that
    # cyclic models produce; all three resolution routes must coincide
    import random as random_module

    from criticut.formula import Not

    rng = random_module.Random(9000 + seed)
    names = [f"k{i}" for i in range(rng.randint(3, 7))]
    f = _random_monotone_formula(rng, names, depth=rng.randint(2, 4))
    from criticut.formula import Atom

    if isinstance(f, Atom):
        f = _random_monotone_formula(rng, names, depth=2)
        if isinstance(f, Atom):
            return
    cnf = tseitin(Not(f))
    costs = {}
    for name in names:
        if name in cnf.var_map.atom_to_var:
            roll = rng.randint(1, 12)
            costs[name] = Cost.parse("inf") if roll > 10 else Cost.of(roll)
    inst = build_instance(cnf, costs)

    try:
        gate_sol = solve_gates(inst)
    except Exception as exc:
        from criticut.gatesolver import UnsupportedShape

        assert isinstance(exc, UnsupportedShape)
        return
    general_sol = _solve_general(inst)
    oracle_sol = brute_force(inst)
    assert _solution_tuple(inst, gate_sol) == _solution_tuple(inst, oracle_sol)
    assert _solution_tuple(inst, general_sol) == _solution_tuple(inst, oracle_sol)
