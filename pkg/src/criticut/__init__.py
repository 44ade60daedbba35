"""criticut: minimal-cost cut analysis for AND/OR dependency graphs."""

from .costs import Cost
from .graph import AndOrGraph, Node, NodeKind, add_artificial_source, depth, remove_nodes, validate, wcc
from .formula import evaluate, form, get_multi_sentence, get_sentence, negate, render
from .cnf import CnfFormula, emit_dimacs, emit_wcnf, parse_wcnf, tseitin
from .maxsat import WpmsInstance, WpmsSolution, brute_force, build_instance, solve
from .metric import CutSolution, MetricReport, analyze, kappa, mu, verify_cut
from .genbench import BenchRecord, CompositionConfig, generate, run_bench
from .hardening import budget_costs, harden_iterate, perimeter_costs, score

__version__ = "0.1.0"

__all__ = [
    "AndOrGraph",
    "BenchRecord",
    "CnfFormula",
    "CompositionConfig",
    "Cost",
    "CutSolution",
    "MetricReport",
    "Node",
    "NodeKind",
    "WpmsInstance",
    "WpmsSolution",
    "add_artificial_source",
    "analyze",
    "brute_force",
    "budget_costs",
    "build_instance",
    "depth",
    "emit_dimacs",
    "emit_wcnf",
    "evaluate",
    "form",
    "generate",
    "get_multi_sentence",
    "get_sentence",
    "harden_iterate",
    "kappa",
    "mu",
    "negate",
    "parse_wcnf",
    "perimeter_costs",
    "remove_nodes",
    "render",
    "run_bench",
    "score",
    "solve",
    "tseitin",
    "validate",
    "verify_cut",
    "wcc",
]
