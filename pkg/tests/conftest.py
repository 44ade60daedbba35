from __future__ import annotations

import json
import random
from pathlib import Path

import pytest

from criticut import graphjson
from criticut.formula import And, Atom, Formula, Not, Or, TRUE, atoms, form
from criticut.graph import add_artificial_source

ROOT = Path(__file__).resolve().parents[1]
SCENARIOS = ROOT / "scenarios"
FIXTURES = ROOT / "fixtures"


@pytest.fixture(scope="session")
def example_graph():
    return graphjson.load_graph(SCENARIOS / "example.json")


@pytest.fixture(scope="session")
def wtn_basic_graph():
    return graphjson.load_graph(SCENARIOS / "wtn_basic.json")


@pytest.fixture(scope="session")
def cycle_graph():
    return graphjson.load_graph(SCENARIOS / "cycle.json")


@pytest.fixture(scope="session")
def wtn_expanded_graph():
    return graphjson.load_graph(SCENARIOS / "wtn_expanded_besteffort.json")


def load_scenario(name: str):
    return graphjson.load_graph(SCENARIOS / f"{name}.json")


def removal_fixtures():
    for path in sorted((FIXTURES / "removal").glob("fixture_*.json")):
        with open(path, "r", encoding="utf-8") as fh:
            yield path.name, json.load(fh)


# --- independent oracles -----------------------------------------------------

def _true_column(index: int, count: int) -> int:
    block = 1 << index
    total = 1 << count
    ones = (1 << block) - 1
    period = (1 << (2 * block)) - 1
    return ((1 << total) - 1) // period * ones


def truth_columns(f: Formula, variables: list[str]) -> int:
    """Evaluate a formula over all 2^n assignments at once.

    Bit i of the result is the formula's value under the assignment where
    variable j is false iff bit j of i is set.
    """
    count = len(variables)
    full = (1 << (1 << count)) - 1
    index = {name: j for j, name in enumerate(variables)}
    values: list[int] = []
    work: list[tuple] = [("eval", f)]
    while work:
        tag, node = work.pop()
        if tag == "eval":
            if isinstance(node, Atom):
                values.append(_true_column(index[node.name], count))
            elif node is TRUE:
                values.append(full)
            elif isinstance(node, Not):
                work.append(("not", node))
                work.append(("eval", node.operand))
            else:
                work.append(("join", node))
                for op in node.operands:
                    work.append(("eval", op))
        elif tag == "not":
            values[-1] ^= full
        else:
            n = len(node.operands)
            group = values[len(values) - n :]
            del values[len(values) - n :]
            acc = group[0]
            if isinstance(node, And):
                for g in group[1:]:
                    acc &= g
            else:
                for g in group[1:]:
                    acc |= g
            values.append(acc)
    (result,) = values
    return result


def formula_satisfiable(f: Formula) -> bool:
    names = sorted(atoms(f))
    if len(names) > 20:
        raise ValueError("truth-table oracle limited to 20 atoms")
    return truth_columns(f, names) != 0


def exhaustive_cut_oracle(graph, target: str | None = None):
    """Minimum over all atomic subsets that disable the target, by sweeping
    every assignment of the finite-cost atoms through the operating sentence.

    Returns (cost_milli, cardinality, sorted node-id tuple) or None when no
    finite subset is a cut.
    """
    import numpy as np

    augmented = add_artificial_source(graph)
    t = target if target is not None else augmented.target
    sentence = form(augmented, t)
    names = sorted(atoms(sentence))
    finite = [n for n in names if not augmented.node(n).cost.is_infinite]
    m = len(finite)
    if m > 20:
        raise ValueError("exhaustive oracle limited to 20 finite atoms")

    # Atoms outside the finite list (infinite costs) are pinned true.
    operating = _truth_with_pinned(sentence, finite)

    size = 1 << m
    cuts = (~operating) & ((1 << size) - 1)
    if cuts == 0:
        return None
    weights = np.array(
        [augmented.node(n).cost.milli for n in finite], dtype=np.int64
    )
    patterns = np.arange(size, dtype=np.int64)
    penalties = np.zeros(size, dtype=np.int64)
    cardinalities = np.zeros(size, dtype=np.int64)
    for j in range(m):
        bit = (patterns >> j) & 1
        penalties += weights[j] * bit
        cardinalities += bit
    feasible = np.frombuffer(
        cuts.to_bytes((size + 7) // 8, "little"), dtype=np.uint8
    )
    feasible = np.unpackbits(feasible, bitorder="little")[:size].astype(bool)

    best_penalty = penalties[feasible].min()
    at_best = feasible & (penalties == best_penalty)
    best_cardinality = cardinalities[at_best].min()
    tied = np.flatnonzero(at_best & (cardinalities == best_cardinality))
    best_key = None
    for pattern in tied:
        key = tuple(sorted(finite[j] for j in range(m) if (int(pattern) >> j) & 1))
        if best_key is None or key < best_key:
            best_key = key
    return int(best_penalty), int(best_cardinality), best_key


def _truth_with_pinned(sentence: Formula, finite: list[str]) -> int:
    """Truth columns with every atom outside ``finite`` held true."""
    pinned = set(atoms(sentence)) - set(finite)
    substituted = _substitute_true(sentence, pinned)
    if substituted is TRUE:
        return (1 << (1 << len(finite))) - 1
    return truth_columns(substituted, finite)


def _substitute_true(f: Formula, pinned: set[str]) -> Formula:
    if isinstance(f, Atom):
        return TRUE if f.name in pinned else f
    if f is TRUE:
        return f
    if isinstance(f, Not):
        inner = _substitute_true(f.operand, pinned)
        if inner is TRUE:
            return Not(TRUE)  # constant false, kept as a negation
        return Not(inner)
    operands = [_substitute_true(op, pinned) for op in f.operands]
    if isinstance(f, And):
        kept = [op for op in operands if op is not TRUE]
        if not kept:
            return TRUE
        if len(kept) == 1:
            return kept[0]
        return And(tuple(kept))
    # Or: a true operand makes the whole disjunction true
    if any(op is TRUE for op in operands):
        return TRUE
    return Or(tuple(operands))


def random_formula(rng: random.Random, atom_names: list[str], depth: int = 4) -> Formula:
    """Random AST over the given atoms; negations appear at every level."""
    if depth == 0 or rng.random() < 0.3:
        leaf: Formula = Atom(rng.choice(atom_names))
        if rng.random() < 0.3:
            leaf = Not(leaf)
        return leaf
    roll = rng.random()
    if roll < 0.15:
        return Not(random_formula(rng, atom_names, depth - 1))
    arity = rng.randint(2, 3)
    operands = tuple(random_formula(rng, atom_names, depth - 1) for _ in range(arity))
    return And(operands) if roll < 0.6 else Or(operands)
