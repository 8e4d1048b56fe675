"""Command-line entry point: ``ggrid <command> ...``.

Exit codes: 0 success, 1 usage or parse error, 2 audit failure,
3 infeasible oracle request.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .bench import load_suite, run_benchmark
from .errors import GgridError, InfeasibleOracleError, ParseError
from .formats import read_instance, serialize_instance
from .generate import MODES, GenParams, generate_instance
from .geometry import Instance
from .ggmst import GgmstSolution, SolverConfig, solve_ggmst
from .ggtsp import VARIANTS, Tour, solve_ggtsp
from .oracle import (
    DEFAULT_SELECTION_CAP,
    AuditReport,
    audit_subtree_lemmas,
    exact_ggmst,
    exact_ggtsp,
    verify_lower_bound,
)
from .render import render_svg

EXIT_OK, EXIT_USAGE, EXIT_AUDIT, EXIT_ORACLE = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _range(text: str) -> tuple[int, int]:
    lo, sep, hi = text.partition("..")
    try:
        return (int(lo), int(hi)) if sep else (int(lo), int(lo))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected LO..HI, got {text!r}") from None


def _sizes(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(s) for s in text.split(",") if s.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated sizes, got {text!r}") from None


def _tree_json(inst: Instance, sol: GgmstSolution) -> dict:
    return {
        "chosen": [sol.chosen[c] for c in inst.cell_order],
        "edges": [list(e) for e in sol.edges],
        "weight": sol.weight,
    }


def _tour_json(tour: Tour) -> dict:
    return {"order": list(tour.order), "weight": tour.weight}


def _emit(obj: dict) -> None:
    sys.stdout.write(json.dumps(obj, sort_keys=True) + "\n")


def _header(inst: Instance) -> dict:
    return {"n": inst.n, "k": inst.k, "N": inst.N}


def _write_svg(path, inst, sol) -> None:
    if path:
        Path(path).write_text(render_svg(inst, sol), encoding="utf-8", newline="\n")


def cmd_solve_ggmst(a) -> int:
    inst = read_instance(a.file)
    sol, tag = solve_ggmst(inst, SolverConfig(epsilon=a.epsilon))
    _emit({**_header(inst), "tag": tag, **_tree_json(inst, sol)})
    _write_svg(a.svg, inst, sol)
    return EXIT_OK


def cmd_solve_ggtsp(a) -> int:
    inst = read_instance(a.file)
    tour, tag = solve_ggtsp(inst, SolverConfig(epsilon=a.epsilon), a.variant)
    _emit({**_header(inst), "tag": tag, "variant": a.variant, **_tour_json(tour)})
    _write_svg(a.svg, inst, tour)
    return EXIT_OK


def cmd_exact(a) -> int:
    inst = read_instance(a.file)
    if a.problem == "mst":
        sol = exact_ggmst(inst, a.cap)
        _emit({**_header(inst), "problem": "mst", **_tree_json(inst, sol)})
    else:
        tour = exact_ggtsp(inst, a.cap)
        _emit({**_header(inst), "problem": "tsp", **_tour_json(tour)})
    return EXIT_OK


def cmd_gen(a) -> int:
    p = GenParams(mode=a.mode, rows=a.rows, cols=a.cols, cells=a.cells, ppc=a.ppc, seed=a.seed)
    text = serialize_instance(generate_instance(p))
    if a.output == "-":
        sys.stdout.write(text)
    else:
        Path(a.output).write_text(text, encoding="utf-8", newline="\n")
    return EXIT_OK


def cmd_bench(a) -> int:
    suite = load_suite(a.suite)
    if a.oracle is not None:
        suite.oracle = a.oracle
    if a.workers is not None:
        suite.workers = a.workers
    suite.timing = a.timing
    result = run_benchmark(suite)
    if a.output == "-":
        sys.stdout.write(result.csv)
    else:
        Path(a.output).write_text(result.csv, encoding="utf-8", newline="\n")
    failed = sum(not r.audit_passed for r in result.records)
    if failed:
        print(f"{failed} record(s) failed an audit", file=sys.stderr)
    return result.exit_code


def cmd_audit(a) -> int:
    """Lower-bound and subtree-floor checks on the tree `solve_ggmst` returns."""
    inst = read_instance(a.file)
    sol, tag = solve_ggmst(inst, SolverConfig(epsilon=a.epsilon))
    report = AuditReport()
    report.add(verify_lower_bound(sol))
    report.extend(audit_subtree_lemmas(inst, sol, a.lemmas, a.sample_cap).entries)
    sys.stdout.write(report.to_csv())
    return EXIT_OK if report.passed else EXIT_AUDIT


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="ggrid", description="Generalized MST and TSP on unit-grid clusters.")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("solve-ggmst", help="epsilon-approximate generalized MST")
    p.add_argument("file")
    p.add_argument("--epsilon", type=float, default=1.0)
    p.add_argument("--svg", help="also write a drawing of the tree")
    p.set_defaults(func=cmd_solve_ggmst)

    p = sub.add_parser("solve-ggtsp", help="approximate generalized TSP tour")
    p.add_argument("file")
    p.add_argument("--variant", choices=VARIANTS, default="christofides")
    p.add_argument("--epsilon", type=float, default=1.0)
    p.add_argument("--svg", help="also write a drawing of the tour")
    p.set_defaults(func=cmd_solve_ggtsp)

    p = sub.add_parser("exact", help="brute-force optimum over point selections")
    p.add_argument("file")
    p.add_argument("--problem", choices=("mst", "tsp"), default="mst")
    p.add_argument("--cap", type=int, default=DEFAULT_SELECTION_CAP, help="max selections to enumerate")
    p.set_defaults(func=cmd_exact)

    p = sub.add_parser("gen", help="write a random instance")
    p.add_argument("--mode", choices=MODES, default="connected-cells")
    p.add_argument("--rows", type=int, default=4)
    p.add_argument("--cols", type=int, default=4)
    p.add_argument("--cells", type=int, default=6)
    p.add_argument("--ppc", type=_range, default=(1, 3), metavar="LO..HI")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("-o", "--output", required=True, help="output file, or - for stdout")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("bench", help="run a benchmark suite and write a CSV report")
    p.add_argument("--suite", help="JSON suite file (default: built-in small suite)")
    p.add_argument("--oracle", action=argparse.BooleanOptionalAction, default=None)
    p.add_argument("--workers", type=int)
    p.add_argument("--timing", action="store_true", help="fill the ms column (output no longer reproducible)")
    p.add_argument("-o", "--output", required=True, help="output CSV, or - for stdout")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("audit", help="check bound statements on the solver's tree")
    p.add_argument("file")
    p.add_argument("--lemmas", type=_sizes, default=(4, 7, 8, 9))
    p.add_argument("--sample-cap", type=int, default=10**5)
    p.add_argument("--epsilon", type=float, default=1.0)
    p.set_defaults(func=cmd_audit)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except InfeasibleOracleError as exc:
        print(f"ggrid: infeasible oracle request: {exc}", file=sys.stderr)
        return EXIT_ORACLE
    except (GgridError, OSError, json.JSONDecodeError) as exc:
        msg = str(exc) if isinstance(exc, ParseError) else f"{type(exc).__name__}: {exc}"
        print(f"ggrid: {msg}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
