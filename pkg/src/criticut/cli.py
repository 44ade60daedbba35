"""Command-line entry points: analyze, bench, serve, solve-wcnf.

Exit codes: 0 success, 2 validation or input failure, 3 target undisruptable.
Set CRITICUT_LOG to control verbosity (DEBUG, INFO, WARNING, ...).
"""

from __future__ import annotations

import argparse
import logging
import os
import sys

from . import graphjson
from .cnf import WcnfError, emit_dimacs, emit_varmap, emit_wcnf, parse_wcnf, tseitin
from .costs import Cost
from .formula import form, negate
from .genbench import CompositionConfig, GenerationError, run_bench, write_csv
from .graph import add_artificial_source, validate
from .graphjson import FormatError
from .maxsat import build_instance, solve
from .metric import UndisruptableError, analyze, render_report_text, solution_document

log = logging.getLogger("criticut")

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_UNSAT = 3


def _configure_logging() -> None:
    level_name = os.environ.get("CRITICUT_LOG", "WARNING").upper()
    level = getattr(logging, level_name, None)
    if not isinstance(level, int):
        level = logging.WARNING
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s")


def _cmd_analyze(args) -> int:
    try:
        graph = graphjson.load_graph(args.input)
    except FileNotFoundError:
        print(f"error: no such file: {args.input}", file=sys.stderr)
        return EXIT_INVALID
    except FormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID

    violations = validate(graph)
    if violations:
        for violation in violations:
            print(f"invalid model: {violation}", file=sys.stderr)
        return EXIT_INVALID
    target = args.target or graph.target

    try:
        report = analyze(graph, target=target)
    except UndisruptableError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_UNSAT

    sys.stdout.write(render_report_text(report, graph, precision=args.precision))

    if args.output:
        doc = solution_document(graph, report)
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(graphjson.dumps_document(doc))
        log.info("wrote solution to %s", args.output)

    if args.export_dimacs or args.export_wcnf:
        augmented = add_artificial_source(graph)
        cnf = tseitin(negate(form(augmented, target)))
        if args.export_dimacs:
            with open(args.export_dimacs, "w", encoding="utf-8") as fh:
                fh.write(emit_dimacs(cnf))
            with open(args.export_dimacs + ".map", "w", encoding="utf-8") as fh:
                fh.write(emit_varmap(cnf))
        if args.export_wcnf:
            instance = build_instance(cnf, augmented.costs())
            with open(args.export_wcnf, "w", encoding="utf-8") as fh:
                fh.write(emit_wcnf(instance))
            with open(args.export_wcnf + ".map", "w", encoding="utf-8") as fh:
                fh.write(emit_varmap(cnf))
    return EXIT_OK


def _cmd_bench(args) -> int:
    try:
        cfg = CompositionConfig.parse(args.config)
        sizes = [int(s.strip()) for s in args.sizes.split(",") if s.strip()]
        if not sizes or any(s < 1 for s in sizes):
            raise GenerationError(f"invalid sizes {args.sizes!r}")
    except (GenerationError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    records = run_bench(sizes, cfg, args.iters, seed_base=args.seed)
    if args.csv:
        write_csv(records, args.csv)
    for record in records:
        if record.error:
            print(
                f"size={record.size} iter={record.iteration} FAILED: {record.error}"
            )
        else:
            print(
                f"size={record.size} iter={record.iteration} "
                f"transform={record.transformationMs:.1f}ms solve={record.solveMs:.1f}ms "
                f"cut={record.cutCost} ({record.cutSize} nodes)"
            )
    return EXIT_OK


def _cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    app = create_app(static_dir=args.static)
    uvicorn.run(app, host=args.host, port=args.port, log_level="info")
    return EXIT_OK


def _cmd_harden(args) -> int:
    from .hardening import HardeningError, harden_iterate

    try:
        graph = graphjson.load_graph(args.input)
    except FileNotFoundError:
        print(f"error: no such file: {args.input}", file=sys.stderr)
        return EXIT_INVALID
    except FormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    violations = validate(graph)
    if violations:
        for violation in violations:
            print(f"invalid model: {violation}", file=sys.stderr)
        return EXIT_INVALID
    try:
        threshold = Cost.parse(args.threshold) if args.threshold else None
        trace = harden_iterate(
            graph, target=args.target, threshold=threshold, max_rounds=args.max_rounds
        )
    except (HardeningError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    for i, r in enumerate(trace.rounds, start=1):
        cut = ", ".join(r.cut_nodes)
        marker = " [terminal]" if r.terminal else ""
        print(f"round {i}: cut {{{cut}}} cost {r.cut_cost.text()}{marker}")
    print(f"status: {trace.status}")
    if args.output:
        import json as _json

        with open(args.output, "w", encoding="utf-8") as fh:
            _json.dump(trace.as_dict(), fh, indent=4)
            fh.write("\n")
    return EXIT_OK


def _cmd_score(args) -> int:
    from .hardening import HardeningError, parse_measures, score

    try:
        measures = parse_measures(args.measures)
    except HardeningError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    print(score(measures).text())
    return EXIT_OK


def _cmd_solve_wcnf(args) -> int:
    try:
        with open(args.path, "r", encoding="utf-8") as fh:
            instance = parse_wcnf(fh.read())
    except FileNotFoundError:
        print(f"error: no such file: {args.path}", file=sys.stderr)
        return EXIT_INVALID
    except WcnfError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    solution = solve(instance)
    if solution is None:
        print("UNSATISFIABLE (hard clauses)")
        return EXIT_UNSAT
    names = solution.falsified_names(instance)
    print(f"optimum penalty: {Cost(solution.penalty).text()}")
    print(f"falsified ({solution.cardinality}): {' '.join(names) if names else '-'}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="criticut",
        description="Minimal-cost cut analysis for AND/OR dependency graphs",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="compute the security metric for a graph file")
    p.add_argument("--input", required=True, help="graph JSON file")
    p.add_argument("--output", help="write the solution JSON here")
    p.add_argument("--target", help="override the target node id")
    p.add_argument("--export-wcnf", help="also write the weighted CNF")
    p.add_argument("--export-dimacs", help="also write the plain CNF")
    p.add_argument("--precision", type=int, help="decimal places for the cut cost")
    p.set_defaults(func=_cmd_analyze)

    p = sub.add_parser("bench", help="generate random graphs and time the pipeline")
    p.add_argument("--sizes", required=True, help="comma-separated node counts")
    p.add_argument("--config", default="60,20,20", help="atomic,and,or percentages")
    p.add_argument("--iters", type=int, default=10)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--csv", help="write records to this CSV file")
    p.set_defaults(func=_cmd_bench)

    p = sub.add_parser("serve", help="run the HTTP analysis service")
    p.add_argument("--port", type=int, default=8000)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--static", help="directory with the viewer bundle")
    p.set_defaults(func=_cmd_serve)

    p = sub.add_parser("harden", help="iterate cut-and-remediate rounds")
    p.add_argument("--input", required=True, help="graph JSON file")
    p.add_argument("--target", help="override the target node id")
    p.add_argument("--threshold", help="stop once the metric reaches this level")
    p.add_argument("--max-rounds", type=int, help="stop after this many rounds")
    p.add_argument("--output", help="write the JSON trace here")
    p.set_defaults(func=_cmd_harden)

    p = sub.add_parser("score", help="physical-measure security score")
    p.add_argument("measures", help="comma-separated ability codes, e.g. C,F,AS")
    p.set_defaults(func=_cmd_score)

    p = sub.add_parser("solve-wcnf", help="solve a weighted DIMACS file")
    p.add_argument("path")
    p.set_defaults(func=_cmd_solve_wcnf)

    return parser


def main(argv=None) -> int:
    _configure_logging()
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
