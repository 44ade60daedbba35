"""Tseitin transformation and DIMACS emission.

Variable numbering: original atoms occupy 1..k in first-occurrence order, and
each distinct non-atomic subformula gets one auxiliary variable, numbered in
post-order. Negations fold into signed literals instead of spending gates.
N-ary connectives are encoded directly with the n-ary biconditional clauses,
so the clause count stays linear in the formula size.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .costs import Cost
from .formula import And, Atom, Formula, Not, TRUE

MAX_WCNF_WEIGHT = 2**63 - 1


class TseitinError(ValueError):
    pass


class WcnfError(ValueError):
    pass


@dataclass
class VarMap:
    """Bijection between node ids and the dense atom variables 1..k."""

    atom_to_var: dict[str, int] = field(default_factory=dict)
    var_to_atom: dict[int, str] = field(default_factory=dict)

    def add(self, name: str) -> int:
        var = self.atom_to_var.get(name)
        if var is None:
            var = len(self.atom_to_var) + 1
            self.atom_to_var[name] = var
            self.var_to_atom[var] = name
        return var

    @property
    def num_atoms(self) -> int:
        return len(self.atom_to_var)


@dataclass(frozen=True)
class Gate:
    """One auxiliary definition: var <-> op(child literals)."""

    var: int
    op: str  # "and" | "or"
    children: tuple[int, ...]


@dataclass
class CnfFormula:
    clauses: list[tuple[int, ...]]
    var_map: VarMap
    num_vars: int
    root_literal: int
    gates: tuple[Gate, ...] = ()

    @property
    def num_clauses(self) -> int:
        return len(self.clauses)


def _clause(literals) -> tuple[int, ...] | None:
    """Dedupe literals; None for tautological clauses (always satisfied)."""
    seen = set(literals)
    if any(-lit in seen for lit in seen):
        return None
    return tuple(sorted(seen, key=abs))


def tseitin(f: Formula) -> CnfFormula:
    """Equisatisfiable CNF of ``f`` with one aux var per distinct connective."""
    if f is TRUE:
        raise TseitinError("formula is trivially satisfiable")

    var_map = VarMap()
    stack: list[Formula] = [f]
    while stack:  # atoms numbered in depth-first, left-to-right order
        node = stack.pop()
        if isinstance(node, Atom):
            var_map.add(node.name)
        elif isinstance(node, Not):
            stack.append(node.operand)
        elif node is TRUE:
            raise TseitinError("constant true must not appear inside a formula")
        else:
            stack.extend(reversed(node.operands))

    gate_vars: dict[tuple[str, tuple[int, ...]], int] = {}
    gates: list[Gate] = []
    next_var = var_map.num_atoms

    lits: dict[int, int] = {}  # id(subformula) -> signed literal
    work: list[tuple[Formula, bool]] = [(f, False)]
    while work:
        node, expanded = work.pop()
        if id(node) in lits:
            continue
        if isinstance(node, Atom):
            lits[id(node)] = var_map.atom_to_var[node.name]
        elif not expanded:
            work.append((node, True))
            if isinstance(node, Not):
                work.append((node.operand, False))
            else:
                work.extend((op, False) for op in reversed(node.operands))
        elif isinstance(node, Not):
            lits[id(node)] = -lits[id(node.operand)]
        else:
            children = tuple(lits[id(op)] for op in node.operands)
            if len(children) == 1:
                lits[id(node)] = children[0]
                continue
            op = "and" if isinstance(node, And) else "or"
            var = gate_vars.get((op, children))
            if var is None:
                next_var += 1
                var = next_var
                gate_vars[(op, children)] = var
                gates.append(Gate(var, op, children))
            lits[id(node)] = var

    clauses: list[tuple[int, ...]] = [(lits[id(f)],)]
    for gate in gates:
        if gate.op == "and":
            long = _clause((gate.var,) + tuple(-c for c in gate.children))
            if long is not None:
                clauses.append(long)
            for c in gate.children:
                short = _clause((-gate.var, c))
                if short is not None:
                    clauses.append(short)
        else:
            long = _clause((-gate.var,) + gate.children)
            if long is not None:
                clauses.append(long)
            for c in gate.children:
                short = _clause((gate.var, -c))
                if short is not None:
                    clauses.append(short)
    return CnfFormula(clauses, var_map, next_var, lits[id(f)], tuple(gates))


def emit_dimacs(c: CnfFormula) -> str:
    """Standard DIMACS CNF with atom-mapping comments."""
    lines = []
    for var in range(1, c.var_map.num_atoms + 1):
        lines.append(f"c {var} {c.var_map.var_to_atom[var]}")
    if c.num_vars > c.var_map.num_atoms:
        lines.append(f"c auxiliary variables: {c.var_map.num_atoms + 1}..{c.num_vars}")
    lines.append(f"p cnf {c.num_vars} {c.num_clauses}")
    for clause in c.clauses:
        lines.append(" ".join(str(lit) for lit in clause) + " 0")
    return "\n".join(lines) + "\n"


def emit_varmap(c: CnfFormula) -> str:
    """Sidecar "var<TAB>nodeId" map for external-solver round-trips."""
    lines = [
        f"{var}\t{c.var_map.var_to_atom[var]}"
        for var in range(1, c.var_map.num_atoms + 1)
    ]
    return "\n".join(lines) + "\n"


def emit_wcnf(inst) -> str:
    """Classic weighted DIMACS: hard clauses at TOP, soft units at weight."""
    soft = sorted(inst.soft.items())
    total = sum(w for _, w in soft)
    top = total + 1
    if top > MAX_WCNF_WEIGHT or any(w > MAX_WCNF_WEIGHT for _, w in soft):
        raise WcnfError("soft weights exceed the representable integer range")
    lines = []
    if inst.var_map is not None:
        for var, _ in soft:
            name = inst.var_map.var_to_atom.get(var)
            if name is not None:
                lines.append(f"c {var} {name}")
    num_clauses = len(inst.hard) + len(soft)
    lines.append(f"p wcnf {inst.num_vars} {num_clauses} {top}")
    for clause in inst.hard:
        lines.append(f"{top} " + " ".join(str(lit) for lit in clause) + " 0")
    for var, weight in soft:
        lines.append(f"{weight} {var} 0")
    return "\n".join(lines) + "\n"


def parse_wcnf(text: str):
    """Parse weighted DIMACS back into a solver instance.

    Unit clauses below TOP weight become soft variables; everything at TOP is
    hard. Comment lines of the form ``c <var> <name>`` rebuild the atom map.
    """
    from .maxsat import WpmsInstance

    top = None
    num_vars = 0
    hard: list[tuple[int, ...]] = []
    soft: dict[int, int] = {}
    var_map = VarMap()
    names: dict[int, str] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("c"):
            parts = line.split()
            if len(parts) == 3 and parts[1].isdigit():
                names[int(parts[1])] = parts[2]
            continue
        if line.startswith("p"):
            parts = line.split()
            if len(parts) != 5 or parts[1] != "wcnf":
                raise WcnfError(f"line {lineno}: expected 'p wcnf V C TOP' header")
            num_vars = int(parts[2])
            top = int(parts[4])
            continue
        if top is None:
            raise WcnfError(f"line {lineno}: clause before header")
        parts = line.split()
        weight = int(parts[0])
        lits = [int(p) for p in parts[1:]]
        if not lits or lits[-1] != 0:
            raise WcnfError(f"line {lineno}: clause must be 0-terminated")
        body = tuple(lits[:-1])
        if not body:
            raise WcnfError(f"line {lineno}: empty clause")
        if weight == top:
            hard.append(body)
        elif len(body) == 1 and body[0] > 0:
            if weight <= 0:
                raise WcnfError(f"line {lineno}: soft weight must be positive")
            soft[body[0]] = soft.get(body[0], 0) + weight
        else:
            raise WcnfError(f"line {lineno}: soft clauses must be positive unit clauses")
    if top is None:
        raise WcnfError("missing 'p wcnf' header")
    for var in sorted(names):
        name = names[var]
        if name not in var_map.atom_to_var:
            var_map.atom_to_var[name] = var
            var_map.var_to_atom[var] = name
    return WpmsInstance(hard=hard, soft=soft, var_map=var_map, num_vars=num_vars)


def scale_cost(cost: Cost) -> int:
    """Fixed-point weight for a finite cost: its count of milli-units."""
    if cost.is_infinite:
        raise WcnfError("infinite costs are encoded as hard clauses, not weights")
    return cost.milli


def weight_to_cost(weight: int) -> Cost:
    return Cost(weight)
