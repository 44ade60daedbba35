"""Pseudo-random graph generation and the benchmark harness.

Construction starts from the target and repeatedly grows predecessors whose
kinds are drawn from a compositional configuration such as (60,20,20): 60%
atomic, 20% AND, 20% OR. Connector nodes waiting for their inputs are
expanded before anything else, so when the size cap is reached only a handful
of them still need leaf children and the drawn proportions survive intact.
"""

from __future__ import annotations

import csv
import random
from collections import deque
from dataclasses import asdict, dataclass
from typing import Iterable

from .costs import Cost
from .graph import AndOrGraph, Node, NodeKind, validate
from .metric import analyze


class GenerationError(ValueError):
    pass


@dataclass(frozen=True)
class CompositionConfig:
    percent_atomic: int
    percent_and: int
    percent_or: int

    def __post_init__(self) -> None:
        values = (self.percent_atomic, self.percent_and, self.percent_or)
        if any(v < 0 for v in values):
            raise GenerationError(f"negative percentage in {values}")
        if sum(values) != 100:
            raise GenerationError(f"percentages {values} must sum to 100")
        if self.percent_atomic < 1:
            raise GenerationError("at least 1% atomic nodes required (leaves must exist)")

    @staticmethod
    def parse(text: str) -> "CompositionConfig":
        parts = text.split(",")
        if len(parts) != 3:
            raise GenerationError(f"expected 'atomic,and,or' percentages, got {text!r}")
        try:
            numbers = [int(p.strip()) for p in parts]
        except ValueError as exc:
            raise GenerationError(f"invalid configuration {text!r}") from exc
        return CompositionConfig(*numbers)

    def text(self) -> str:
        return f"{self.percent_atomic},{self.percent_and},{self.percent_or}"


def generate(n: int, cfg: CompositionConfig, seed: int) -> AndOrGraph:
    """Seeded deterministic graph of roughly ``n`` nodes (stops at the first
    count >= n; pending connectors still receive their leaf inputs).

    Atomic nodes are grown as agents so the frontier never starves; once
    growth stops, unexpanded agents at the perimeter become sensors (sensors
    never receive edges, so only in-degree-0 nodes qualify).
    """
    if n < 1:
        raise GenerationError("target size must be at least 1")
    rng = random.Random(seed)
    counter = 0

    nodes: list[Node] = [Node("t", NodeKind.ACTUATOR, Cost.of(rng.randint(1, 10)))]
    edges: list[tuple[str, str]] = []
    count = 1
    pending_logical: deque[str] = deque()
    pending_atomic: deque[str] = deque(["t"])

    def draw_kind() -> str:
        roll = rng.randrange(100)
        if roll < cfg.percent_atomic:
            return "atomic"
        if roll < cfg.percent_atomic + cfg.percent_and:
            return "and"
        return "or"

    def new_node(kind: str, parent: str) -> None:
        nonlocal counter, count
        counter += 1
        nid = f"n{counter}"
        if kind == "atomic":
            nodes.append(Node(nid, NodeKind.AGENT, Cost.of(rng.randint(1, 10))))
            pending_atomic.append(nid)
        elif kind == "and":
            nodes.append(Node(nid, NodeKind.AND))
            pending_logical.append(nid)
        else:
            nodes.append(Node(nid, NodeKind.OR))
            pending_logical.append(nid)
        edges.append((nid, parent))
        count += 1

    # Connectors are expanded before anything else so that hitting the size
    # cap leaves almost no unfilled inputs to distort the drawn proportions.
    while count < n:
        if pending_logical:
            parent = pending_logical.popleft()
            for _ in range(rng.randint(2, 3)):
                new_node(draw_kind(), parent)
        else:
            parent = pending_atomic.popleft()
            new_node(draw_kind(), parent)

    while pending_logical:
        parent = pending_logical.popleft()
        for _ in range(2):
            counter += 1
            nid = f"n{counter}"
            nodes.append(Node(nid, NodeKind.SENSOR, Cost.of(rng.randint(1, 10))))
            edges.append((nid, parent))
            count += 1

    # Perimeter relabeling: agent leaves become sensors, except directly
    # upstream of the actuator target where only agents may connect.
    with_pred = {tgt for _, tgt in edges}
    feeds_target = {src for src, tgt in edges if tgt == "t"}
    final_nodes = []
    for node in nodes:
        if (
            node.kind is NodeKind.AGENT
            and node.id not in with_pred
            and node.id not in feeds_target
        ):
            final_nodes.append(Node(node.id, NodeKind.SENSOR, node.cost))
        else:
            final_nodes.append(node)
    graph = AndOrGraph(final_nodes, edges, "t")
    violations = validate(graph)
    if violations:
        raise GenerationError(f"generated graph is invalid: {violations}")
    return graph


@dataclass
class BenchRecord:
    size: int
    config: str
    iteration: int
    seed: int
    transformationMs: float
    solveMs: float
    cnfVariables: int
    cnfClauses: int
    cutCost: str
    cutSize: int
    error: str = ""


CSV_FIELDS = [
    "size",
    "config",
    "iteration",
    "seed",
    "transformationMs",
    "solveMs",
    "cnfVariables",
    "cnfClauses",
    "cutCost",
    "cutSize",
    "error",
]


def run_bench(
    sizes: Iterable[int],
    cfg: CompositionConfig,
    iterations: int,
    seed_base: int = 0,
) -> list[BenchRecord]:
    """Generate-and-analyze each (size, iteration); failures become records."""
    records: list[BenchRecord] = []
    index = 0
    for size in sizes:
        for iteration in range(iterations):
            seed = seed_base + index
            index += 1
            try:
                graph = generate(size, cfg, seed)
                report = analyze(graph)
                records.append(
                    BenchRecord(
                        size=size,
                        config=cfg.text(),
                        iteration=iteration,
                        seed=seed,
                        transformationMs=report.transformation_ms,
                        solveMs=report.solve_ms,
                        cnfVariables=report.cnf_variables,
                        cnfClauses=report.cnf_clauses,
                        cutCost=report.kappa.text(),
                        cutSize=report.cut.cardinality,
                    )
                )
            except Exception as exc:  # keep the run going; the record says why
                records.append(
                    BenchRecord(
                        size=size,
                        config=cfg.text(),
                        iteration=iteration,
                        seed=seed,
                        transformationMs=0.0,
                        solveMs=0.0,
                        cnfVariables=0,
                        cnfClauses=0,
                        cutCost="",
                        cutSize=0,
                        error=f"{type(exc).__name__}: {exc}",
                    )
                )
    return records


def write_csv(records: list[BenchRecord], path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=CSV_FIELDS)
        writer.writeheader()
        for record in records:
            writer.writerow(asdict(record))


def read_csv(path) -> list[BenchRecord]:
    records = []
    with open(path, "r", encoding="utf-8", newline="") as fh:
        for row in csv.DictReader(fh):
            records.append(
                BenchRecord(
                    size=int(row["size"]),
                    config=row["config"],
                    iteration=int(row["iteration"]),
                    seed=int(row["seed"]),
                    transformationMs=float(row["transformationMs"]),
                    solveMs=float(row["solveMs"]),
                    cnfVariables=int(row["cnfVariables"]),
                    cnfClauses=int(row["cnfClauses"]),
                    cutCost=row["cutCost"],
                    cutSize=int(row["cutSize"]),
                    error=row["error"],
                )
            )
    return records


def kind_proportions(graph: AndOrGraph) -> tuple[float, float, float]:
    """(atomic, and, or) shares of a graph's nodes, source excluded."""
    counts = {"atomic": 0, "and": 0, "or": 0}
    for node in graph.nodes():
        if node.kind is NodeKind.SOURCE:
            continue
        if node.kind is NodeKind.AND:
            counts["and"] += 1
        elif node.kind is NodeKind.OR:
            counts["or"] += 1
        else:
            counts["atomic"] += 1
    total = sum(counts.values())
    return (
        counts["atomic"] / total,
        counts["and"] / total,
        counts["or"] / total,
    )
