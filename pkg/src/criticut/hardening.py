"""Security applications built on the metric: physical-measure scoring,
perimeter (depth-based) cost assignment, iterative threshold hardening, and
budget-weighted cost blending."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

from .costs import Cost
from .graph import AndOrGraph, depth
from .metric import UndisruptableError, mu

MEASURE_WEIGHTS = {
    "C": 1,   # stored in container
    "LC": 2,  # locked container
    "F": 1,   # fenced area
    "B": 2,   # stored in building
    "LB": 3,  # locked building
    "AS": 3,  # monitored area (alarm system)
    "MA": 4,  # multi-authentication
}


class HardeningError(ValueError):
    pass


def parse_measures(text: str) -> frozenset[str]:
    """Comma-separated ability codes, e.g. "C,F,AS"."""
    if not text.strip():
        return frozenset()
    codes = [part.strip() for part in text.split(",")]
    unknown = [c for c in codes if c not in MEASURE_WEIGHTS]
    if unknown:
        raise HardeningError(f"unknown measure code(s) {unknown}")
    return frozenset(codes)


def score(measures) -> Cost:
    """Attacker effort implied by a set of physical protection measures."""
    unknown = [m for m in measures if m not in MEASURE_WEIGHTS]
    if unknown:
        raise HardeningError(f"unknown measure code(s) {sorted(unknown)}")
    return Cost.of(sum(MEASURE_WEIGHTS[m] for m in set(measures)))


def perimeter_costs(graph: AndOrGraph, count_logical: bool = True) -> dict[str, Cost]:
    """Cost assignment for perimeter analysis: each atomic node costs its
    distance from the source, so edge components are the cheap ones.

    The graph must already be source-augmented. An infinite-cost target keeps
    its cost. When the map is fed back into the metric, the artificial source
    stays infinite regardless of its zero depth.
    """
    costs: dict[str, Cost] = {}
    for node in graph.nodes():
        if not node.kind.is_atomic:
            continue
        if node.id == graph.target and node.cost is not None and node.cost.is_infinite:
            costs[node.id] = node.cost
            continue
        costs[node.id] = Cost.of(depth(graph, node.id, count_logical=count_logical))
    return costs


@dataclass(frozen=True)
class HardeningRound:
    cut_nodes: tuple[str, ...]
    cut_cost: Cost
    remediated: tuple[str, ...]  # cumulative through this round
    terminal: bool = False

    def as_dict(self) -> dict:
        return {
            "cut": list(self.cut_nodes),
            "cost": "inf" if self.cut_cost.is_infinite else self.cut_cost.json_number(),
            "remediated": list(self.remediated),
            "terminal": self.terminal,
        }


@dataclass(frozen=True)
class HardeningTrace:
    rounds: tuple[HardeningRound, ...]
    status: str  # threshold-reached | max-rounds | fully-hardened

    def as_dict(self) -> dict:
        return {"rounds": [r.as_dict() for r in self.rounds], "status": self.status}


def harden_iterate(
    graph: AndOrGraph,
    target: str | None = None,
    threshold: Cost | None = None,
    max_rounds: int | None = None,
) -> HardeningTrace:
    """Fix the current critical set (infinite cost), recompute, repeat.

    Stops once the metric reaches the threshold, after ``max_rounds``, or when
    no finite attack remains; the final state is then recorded as a terminal
    round naming the target.
    """
    if threshold is None and max_rounds is None:
        max_rounds_limit = len(graph.atomic_ids()) + 1
    else:
        max_rounds_limit = max_rounds if max_rounds is not None else len(graph.atomic_ids()) + 1
    if max_rounds_limit < 1:
        raise HardeningError("max_rounds must be at least 1")

    costs = dict(graph.costs())
    remediated: list[str] = []
    rounds: list[HardeningRound] = []
    status = "max-rounds"
    for _ in range(max_rounds_limit):
        try:
            cut = mu(graph, target, costs=costs)
        except UndisruptableError:
            t = target if target is not None else graph.target
            rounds.append(
                HardeningRound((t,), Cost.infinite(), tuple(remediated), terminal=True)
            )
            status = "fully-hardened"
            break
        for nid in cut.nodes:
            if nid not in remediated:
                remediated.append(nid)
            costs[nid] = Cost.infinite()
        rounds.append(HardeningRound(cut.nodes, cut.cost, tuple(sorted(remediated))))
        if threshold is not None and not (cut.cost < threshold):
            status = "threshold-reached"
            break
    return HardeningTrace(tuple(rounds), status)


def budget_costs(
    costs: Mapping[str, Cost],
    budgets: Mapping[str, "Cost | int | float | str"],
    alpha: "float | str",
    beta: "float | str",
) -> dict[str, Cost]:
    """Blend attacker cost with remediation budget: alpha*cost + beta*budget.

    Coefficients must lie in [0, 1] and sum to exactly 1. Infinite costs stay
    infinite; results land on the milli-unit grid (ties round up).
    """
    fa, fb = Fraction(str(alpha)), Fraction(str(beta))
    if not (0 <= fa <= 1 and 0 <= fb <= 1) or fa + fb != 1:
        raise HardeningError(
            f"coefficients must be in [0,1] and sum to 1, got alpha={alpha}, beta={beta}"
        )
    blended: dict[str, Cost] = {}
    for name, cost in costs.items():
        if cost.is_infinite:
            blended[name] = cost
            continue
        if name not in budgets:
            raise HardeningError(f"missing budget for node {name!r}")
        budget = Cost.of(budgets[name])
        if budget.is_infinite:
            raise HardeningError(f"budget for node {name!r} must be finite")
        value = fa * cost.milli + fb * budget.milli
        milli = (2 * value.numerator + value.denominator) // (2 * value.denominator)
        blended[name] = Cost(int(milli))
    return blended
