"""Weighted Partial MAX-SAT over hard clauses plus weighted soft units.

Soft clauses are positive units, one per atomic graph node; falsifying one
costs its weight. Nodes that cannot be compromised become hard units instead
of carrying huge weights, which keeps the penalty arithmetic exact.

The optimum is fully determinized: smallest penalty, then fewest falsified
variables, then the lexicographically smallest falsified id-set. Two exact
engines share that contract: a branch-and-bound search over soft variables
for arbitrary instances, and a closure solver that exploits the connective
structure recorded by the Tseitin stage (see gatesolver), without which large
tree-shaped instances would not solve in reasonable time.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

from .cnf import CnfFormula, Gate, VarMap, scale_cost
from .costs import Cost


class MaxsatError(ValueError):
    pass


@dataclass
class WpmsInstance:
    hard: list[tuple[int, ...]]
    soft: dict[int, int]  # variable -> positive weight in milli-units
    var_map: VarMap | None
    num_vars: int
    gates: tuple[Gate, ...] | None = None
    root_literal: int | None = None
    forced: frozenset[int] = frozenset()

    def name_of(self, var: int) -> str:
        if self.var_map is not None:
            name = self.var_map.var_to_atom.get(var)
            if name is not None:
                return name
        return f"#{var:09d}"

    def lex_key(self, falsified) -> tuple[str, ...]:
        return tuple(sorted(self.name_of(v) for v in falsified))


@dataclass
class WpmsSolution:
    assignment: dict[int, bool]
    falsified: frozenset[int]
    penalty: int  # milli-units
    cardinality: int

    def falsified_names(self, inst: WpmsInstance) -> tuple[str, ...]:
        return inst.lex_key(self.falsified)

    @property
    def cost(self) -> Cost:
        return Cost(self.penalty)


def build_instance(c: CnfFormula, costs: Mapping[str, Cost]) -> WpmsInstance:
    """Attach weights to a CNF: soft units for finite costs, hard units for
    infinite ones."""
    hard = list(c.clauses)
    soft: dict[int, int] = {}
    forced: set[int] = set()
    for name, var in c.var_map.atom_to_var.items():
        if name not in costs:
            raise MaxsatError(f"missing cost for node {name!r}")
        cost = costs[name]
        if cost.is_infinite:
            hard.append((var,))
            forced.add(var)
        elif cost.is_zero:
            raise MaxsatError(
                f"node {name!r} has zero cost; weights must be positive "
                "(use a small epsilon cost, or model the node as compromised "
                "by forcing it false)"
            )
        else:
            soft[var] = scale_cost(cost)
    return WpmsInstance(
        hard=hard,
        soft=soft,
        var_map=c.var_map,
        num_vars=c.num_vars,
        gates=c.gates,
        root_literal=c.root_literal,
        forced=frozenset(forced),
    )


def _propagate(clauses, assign: dict[int, bool]) -> bool:
    """Unit propagation to fixpoint; False on conflict."""
    changed = True
    while changed:
        changed = False
        for clause in clauses:
            satisfied = False
            unassigned = None
            unassigned_count = 0
            for lit in clause:
                value = assign.get(abs(lit))
                if value is None:
                    unassigned = lit
                    unassigned_count += 1
                elif value == (lit > 0):
                    satisfied = True
                    break
            if satisfied:
                continue
            if unassigned_count == 0:
                return False
            if unassigned_count == 1:
                assign[abs(unassigned)] = unassigned > 0
                changed = True
    return True


def _all_satisfied(clauses, assign: dict[int, bool]) -> bool:
    for clause in clauses:
        if not any(assign.get(abs(lit)) == (lit > 0) for lit in clause):
            return False
    return True


def _decide(clauses, base: dict[int, bool]) -> dict[int, bool] | None:
    """Plain DPLL completion over the remaining (cost-free) variables."""
    work = [dict(base)]
    while work:
        assign = work.pop()
        if not _propagate(clauses, assign):
            continue
        branch_var = None
        for clause in clauses:
            satisfied = False
            candidate = None
            for lit in clause:
                value = assign.get(abs(lit))
                if value is None:
                    candidate = abs(lit)
                elif value == (lit > 0):
                    satisfied = True
                    break
            if not satisfied and candidate is not None:
                branch_var = candidate
                break
        if branch_var is None:
            return assign  # every clause satisfied
        for value in (False, True):
            nxt = dict(assign)
            nxt[branch_var] = value
            work.append(nxt)
    return None


def _fill_assignment(inst: WpmsInstance, assign: dict[int, bool]) -> dict[int, bool]:
    full = dict(assign)
    for var in range(1, inst.num_vars + 1):
        full.setdefault(var, True)
    return full


def _greedy_seed(inst: WpmsInstance, order: list[int]):
    """Feasible starting point: falsify everything, then un-falsify greedily
    from the heaviest weight down while hard clauses stay satisfiable."""
    assign = {v: False for v in inst.soft}
    solution = _decide(inst.hard, assign)
    if solution is None:
        return None
    for var in order:
        attempt = dict(assign)
        attempt[var] = True
        decided = _decide(inst.hard, attempt)
        if decided is not None:
            assign = attempt
            solution = decided
    falsified = frozenset(v for v in inst.soft if not assign[v])
    return falsified, solution


def _solve_general(inst: WpmsInstance) -> WpmsSolution | None:
    """Branch and bound on soft variables in descending-weight order, with
    unit propagation on hard clauses and pruning against the incumbent."""
    weights = inst.soft
    order = sorted(weights, key=lambda v: (-weights[v], inst.name_of(v)))
    rank = {v: i for i, v in enumerate(order)}

    best: list = [None]  # [(penalty, cardinality, lexkey, falsified, assignment)]

    def offer(falsified: frozenset[int], assignment: dict[int, bool]) -> None:
        penalty = sum(weights[v] for v in falsified)
        candidate = (penalty, len(falsified), inst.lex_key(falsified), falsified, assignment)
        if best[0] is None or candidate[:3] < best[0][:3]:
            best[0] = candidate

    seeded = _greedy_seed(inst, order)
    if seeded is not None:
        offer(*seeded)

    stack: list[dict[int, bool]] = [{}]
    while stack:
        assign = stack.pop()
        if not _propagate(inst.hard, assign):
            continue
        penalty = 0
        cardinality = 0
        for v in order:
            if assign.get(v) is False:
                penalty += weights[v]
                cardinality += 1
        if best[0] is not None:
            if penalty > best[0][0] or (penalty == best[0][0] and cardinality > best[0][1]):
                continue
        if _all_satisfied(inst.hard, assign):
            falsified = frozenset(v for v in order if assign.get(v) is False)
            offer(falsified, _fill_assignment(inst, assign))
            continue
        branch = None
        for v in order:
            if v not in assign:
                branch = v
                break
        if branch is None:
            completed = _decide(inst.hard, assign)
            if completed is not None:
                falsified = frozenset(v for v in order if assign.get(v) is False)
                offer(falsified, _fill_assignment(inst, completed))
            continue
        low = dict(assign)
        low[branch] = False
        high = dict(assign)
        high[branch] = True
        stack.append(low)
        stack.append(high)  # try "not compromised" first

    if best[0] is None:
        return None
    penalty, cardinality, _, falsified, assignment = best[0]
    return WpmsSolution(assignment, falsified, penalty, cardinality)


def _check_hard(inst: WpmsInstance, assignment: dict[int, bool]) -> None:
    for clause in inst.hard:
        if not any(assignment.get(abs(lit)) == (lit > 0) for lit in clause):
            raise MaxsatError(f"internal error: solution violates hard clause {clause}")


def solve(inst: WpmsInstance) -> WpmsSolution | None:
    """Optimal solution (penalty, then cardinality, then lexicographic
    falsified set), or None when the hard clauses are unsatisfiable."""
    from .gatesolver import UnsupportedShape, solve_gates

    solution = None
    if inst.gates is not None and inst.root_literal is not None:
        try:
            solution = solve_gates(inst)
        except UnsupportedShape:
            solution = _solve_general(inst)
        else:
            if solution is None:
                return None
    else:
        solution = _solve_general(inst)
    if solution is None:
        return None
    _check_hard(inst, solution.assignment)
    expected = sum(inst.soft[v] for v in solution.falsified)
    if expected != solution.penalty or len(solution.falsified) != solution.cardinality:
        raise MaxsatError("internal error: inconsistent solution bookkeeping")
    for v in inst.soft:
        if solution.assignment.get(v, True) != (v not in solution.falsified):
            raise MaxsatError("internal error: falsified set does not match assignment")
    return solution


def _true_column(index: int, width_log: int) -> int:
    """Truth-table column (as a bit integer) where variable ``index`` is true."""
    block = 1 << index
    total = 1 << width_log
    ones = (1 << block) - 1
    period = (1 << (2 * block)) - 1
    return ((1 << total) - 1) // period * ones


def brute_force(inst: WpmsInstance) -> WpmsSolution | None:
    """Exhaustive oracle: every falsification pattern of the soft variables,
    feasibility decided by a propagation-complete check over the rest."""
    softs = sorted(inst.soft, key=inst.name_of)
    m = len(softs)
    if m > 24:
        raise MaxsatError(f"brute force supports at most 24 soft variables, got {m}")
    if inst.gates is not None and inst.root_literal is not None:
        try:
            return _brute_force_gates(inst, softs)
        except Exception as exc:  # fall through to the generic path
            from .gatesolver import UnsupportedShape

            if not isinstance(exc, UnsupportedShape):
                raise
    return _brute_force_generic(inst, softs)


def _brute_force_generic(inst: WpmsInstance, softs: list[int]) -> WpmsSolution | None:
    best = None
    for pattern in range(1 << len(softs)):
        falsified = frozenset(
            softs[j] for j in range(len(softs)) if (pattern >> j) & 1
        )
        penalty = sum(inst.soft[v] for v in falsified)
        if best is not None and penalty > best[0]:
            continue
        assign = {v: (v not in falsified) for v in softs}
        decided = _decide(inst.hard, assign)
        if decided is None:
            continue
        candidate = (penalty, len(falsified), inst.lex_key(falsified), falsified, decided)
        if best is None or candidate[:3] < best[:3]:
            best = candidate
    if best is None:
        return None
    penalty, cardinality, _, falsified, assignment = best
    return WpmsSolution(_fill_assignment(inst, assignment), falsified, penalty, cardinality)


def _brute_force_gates(inst: WpmsInstance, softs: list[int]) -> WpmsSolution | None:
    """Truth-table sweep evaluated with bitset columns over the connective
    structure; feasible patterns are exactly those satisfying the objective."""
    from .gatesolver import UnsupportedShape

    m = len(softs)
    full = (1 << (1 << m)) - 1
    columns: dict[int, int] = {}
    index_of = {v: j for j, v in enumerate(softs)}
    atom_count = inst.var_map.num_atoms if inst.var_map else 0
    for var in range(1, atom_count + 1):
        if var in index_of:
            columns[var] = _true_column(index_of[var], m)
        elif var in inst.forced:
            columns[var] = full
        else:
            raise UnsupportedShape("atom is neither soft nor forced")

    def column(lit: int) -> int:
        col = columns[abs(lit)]
        return col if lit > 0 else (full ^ col)

    for gate in inst.gates:
        cols = [column(c) for c in gate.children]
        acc = cols[0]
        if gate.op == "and":
            for c in cols[1:]:
                acc &= c
        else:
            for c in cols[1:]:
                acc |= c
        columns[gate.var] = acc

    feasible = column(inst.root_literal)
    weights = [inst.soft[v] for v in softs]
    penalties = [0] * (1 << m)
    for pattern in range(1, 1 << m):
        low = pattern & -pattern
        penalties[pattern] = penalties[pattern ^ low] + weights[low.bit_length() - 1]

    best = None
    for pattern in range(1 << m):
        if not (feasible >> pattern) & 1:
            continue
        penalty = penalties[pattern]
        cardinality = bin(pattern).count("1")
        if best is not None and (penalty, cardinality) > best[:2]:
            continue
        falsified = frozenset(softs[j] for j in range(m) if (pattern >> j) & 1)
        candidate = (penalty, cardinality, inst.lex_key(falsified), falsified)
        if best is None or candidate[:3] < best[:3]:
            best = candidate
    if best is None:
        return None
    penalty, cardinality, _, falsified = best
    assign = {v: (v not in falsified) for v in softs}
    for v in inst.forced:
        assign[v] = True
    for gate in inst.gates:
        values = [
            assign[abs(c)] if c > 0 else not assign[abs(c)] for c in gate.children
        ]
        assign[gate.var] = all(values) if gate.op == "and" else any(values)
    return WpmsSolution(_fill_assignment(inst, assign), falsified, penalty, cardinality)
