"""Benchmark harness: run solvers over a suite, compare with the oracle, audit bounds.

A suite is a JSON document::

    {
      "epsilon": 1.0,
      "oracle": true,
      "solvers": ["alg1", "ggmst", "double-tree", "christofides"],
      "files": ["path/to/a.ggrid"],
      "generate": [
        {"count": 20, "mode": "connected-cells", "rows": 4, "cols": 4,
         "cells": [3, 8], "ppc": [1, 3], "seed": 7}
      ]
    }

``cells`` may be an integer or an inclusive ``[lo, hi]`` range. Instance
``i`` of a ``generate`` block uses seed ``seed + i``.

The CSV report has the columns in `COLUMNS`, one row per (instance,
solver), followed by a ``summary`` max row and mean row. Runtimes are
only recorded on request because they break byte-for-byte reproducibility.
"""
from __future__ import annotations

import csv
import io
import json
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import InfeasibleOracleError, InvalidArgumentError
from .formats import read_instance
from .generate import GenParams, generate_instance
from .geometry import Instance
from .ggmst import APPROX_RATIO, TAG_HEURISTIC, SolverConfig, cell_level_mst, g0_weight, median_merge, solve_ggmst
from .ggtsp import (
    CHRISTOFIDES_ADDITIVE,
    CHRISTOFIDES_RATIO,
    DOUBLE_TREE_ADDITIVE,
    DOUBLE_TREE_RATIO,
    christofides_tour,
    double_tree_tour,
    solve_ggtsp,
)
from .oracle import (
    HELD_KARP_MAX_CELLS,
    AuditReport,
    bound_entry,
    exact_ggmst,
    exact_ggtsp,
    tsp_work,
    verify_corollary1,
    verify_g0_bound,
    verify_lower_bound,
    verify_theorem1,
)

COLUMNS = ["instance", "n", "k", "N", "solver", "weight", "opt_weight", "ratio", "ms", "min_margin"]
SOLVERS = ("alg1", "ggmst", "double-tree", "christofides", "ggtsp")
TREE_SOLVERS = ("alg1", "ggmst")
DEFAULT_SOLVERS = ("alg1", "ggmst", "double-tree", "christofides")
ORACLE_SKIPPED = "oracle-skipped"


@dataclass
class BenchRecord:
    instance: str
    n: int
    k: int
    N: int
    solver: str
    weight: float
    opt_weight: float | None = None
    ratio: float | None = None
    ms: float | None = None
    min_margin: float | None = None
    oracle_skipped: bool = False
    audit_passed: bool = True

    def row(self) -> list[str]:
        def f(v):
            return "" if v is None else repr(float(v))

        opt = ORACLE_SKIPPED if self.oracle_skipped else f(self.opt_weight)
        ms = "" if self.ms is None else f"{self.ms:.3f}"
        return [self.instance, str(self.n), str(self.k), str(self.N), self.solver, f(self.weight), opt, f(self.ratio), ms, f(self.min_margin)]


@dataclass
class Suite:
    instances: list[tuple[str, Instance]] = field(default_factory=list)
    solvers: tuple[str, ...] = DEFAULT_SOLVERS
    oracle: bool = True
    epsilon: float = 1.0
    workers: int = 1
    timing: bool = False

    def __post_init__(self):
        bad = [s for s in self.solvers if s not in SOLVERS]
        if bad:
            raise InvalidArgumentError(f"unknown solvers {bad}; choose from {SOLVERS}")


@dataclass
class BenchResult:
    records: list[BenchRecord]
    csv: str
    exit_code: int


def default_suite_spec() -> dict:
    return {
        "epsilon": 1.0,
        "oracle": True,
        "solvers": list(DEFAULT_SOLVERS),
        "generate": [
            {"count": 10, "mode": "connected-cells", "rows": 4, "cols": 4, "cells": [3, 8], "ppc": [1, 3], "seed": 1},
            {"count": 10, "mode": "clustered", "rows": 8, "cols": 8, "cells": [3, 8], "ppc": [1, 3], "seed": 101},
        ],
    }


def _cells_for(block: dict, i: int) -> int:
    cells = block.get("cells", 6)
    if isinstance(cells, int):
        return cells
    lo, hi = cells
    return int(np.random.default_rng([int(block.get("seed", 0)), i]).integers(lo, hi + 1))


def suite_from_spec(spec: dict, base: Path | None = None) -> Suite:
    instances: list[tuple[str, Instance]] = []
    for name in spec.get("files", []):
        path = Path(name) if base is None or Path(name).is_absolute() else base / name
        instances.append((path.stem, read_instance(path)))
    for block in spec.get("generate", []):
        seed = int(block.get("seed", 0))
        for i in range(int(block.get("count", 1))):
            p = GenParams(
                mode=block.get("mode", "connected-cells"),
                rows=int(block.get("rows", 4)),
                cols=int(block.get("cols", 4)),
                cells=_cells_for(block, i),
                ppc=tuple(block.get("ppc", (1, 3))),
                seed=seed + i,
            )
            instances.append((f"{p.mode}-s{p.seed}", generate_instance(p)))
    return Suite(
        instances=instances,
        solvers=tuple(spec.get("solvers", DEFAULT_SOLVERS)),
        oracle=bool(spec.get("oracle", True)),
        epsilon=float(spec.get("epsilon", 1.0)),
        workers=int(spec.get("workers", 1)),
    )


def load_suite(path=None) -> Suite:
    if path is None:
        return suite_from_spec(default_suite_spec())
    path = Path(path)
    return suite_from_spec(json.loads(path.read_text(encoding="utf-8")), path.parent)


def _ratio(w: float, opt: float) -> float:
    if opt > 0:
        return w / opt
    return 1.0 if w <= 1e-12 else math.inf


def _tour_oracle_ok(inst: Instance, cfg: SolverConfig) -> bool:
    return (
        inst.k <= HELD_KARP_MAX_CELLS
        and inst.selection_count() <= cfg.exact_fallback_cap
        and tsp_work(inst) <= cfg.tsp_work_cap
    )


def _bench_instance(args) -> list[BenchRecord]:
    name, inst, suite = args
    cfg = SolverConfig(epsilon=suite.epsilon)
    opt_tree = opt_tour = None
    tree_skipped = tour_skipped = not suite.oracle
    if suite.oracle:
        try:
            opt_tree = exact_ggmst(inst, cfg.exact_fallback_cap)
        except InfeasibleOracleError:
            tree_skipped = True
        if any(s not in TREE_SOLVERS for s in suite.solvers):
            if _tour_oracle_ok(inst, cfg):
                opt_tour = exact_ggtsp(inst, cfg.exact_fallback_cap)
            else:
                tour_skipped = True

    records = []
    for solver in suite.solvers:
        report = AuditReport()
        t0 = time.perf_counter()
        if solver == "alg1":
            tree, g0 = cell_level_mst(inst)
            sol = median_merge(inst, tree, g0)
            label = "alg1"
        elif solver == "ggmst":
            sol, tag = solve_ggmst(inst, cfg)
            label = f"ggmst:{tag}"
        elif solver == "double-tree":
            t_a = solve_ggmst(inst, cfg).solution
            sol = double_tree_tour(inst, t_a)
            label = "double-tree"
        elif solver == "christofides":
            sol, tag = christofides_tour(inst, cfg.matching_cap)
            label = f"christofides:{tag}"
        else:
            sol, tag = solve_ggtsp(inst, cfg, "christofides")
            label = f"ggtsp:{tag}"
        ms = (time.perf_counter() - t0) * 1e3 if suite.timing else None

        if solver in TREE_SOLVERS:
            report.add(verify_lower_bound(sol))
            opt = opt_tree
            skipped = tree_skipped
            if opt is not None:
                report.add(verify_lower_bound(opt))
                report.add(verify_corollary1(sol, opt))
                if solver == "alg1":
                    report.add(verify_theorem1(sol, opt, inst.N))
                    report.add(verify_g0_bound(g0_weight(inst, g0), opt))
                elif tag != TAG_HEURISTIC:
                    report.add(bound_entry("epsilon-ratio", sol.weight, (APPROX_RATIO + suite.epsilon) * opt.weight))
        else:
            opt = opt_tour
            skipped = tour_skipped
            if solver == "double-tree":
                report.add(bound_entry("double-tree-2x", sol.weight, 2 * t_a.weight))
            if opt_tree is not None:
                report.add(bound_entry("tour-above-tree-opt", opt_tree.weight, sol.weight))
            if opt is not None:
                if solver == "double-tree":
                    report.add(bound_entry("double-tree-ratio", sol.weight, DOUBLE_TREE_RATIO * opt.weight + DOUBLE_TREE_ADDITIVE))
                else:
                    report.add(bound_entry("christofides-ratio", sol.weight, CHRISTOFIDES_RATIO * opt.weight + CHRISTOFIDES_ADDITIVE))
        records.append(
            BenchRecord(
                instance=name,
                n=inst.n,
                k=inst.k,
                N=inst.N,
                solver=label,
                weight=sol.weight,
                opt_weight=None if opt is None else opt.weight,
                ratio=None if opt is None else _ratio(sol.weight, opt.weight),
                ms=ms,
                min_margin=report.min_margin if report.entries else None,
                oracle_skipped=skipped,
                audit_passed=report.passed,
            )
        )
    return records


def run_benchmark(suite: Suite) -> BenchResult:
    """Run every solver on every instance; exit code 2 if any audit fails."""
    jobs = [(name, inst, suite) for name, inst in suite.instances]
    if suite.workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=suite.workers) as pool:
            # map() yields in submission order, which keeps the report deterministic
            per_instance = list(pool.map(_bench_instance, jobs))
    else:
        per_instance = [_bench_instance(j) for j in jobs]
    records = [r for rs in per_instance for r in rs]

    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(COLUMNS)
    for r in records:
        w.writerow(r.row())
    if records:
        ratios = [r.ratio for r in records if r.ratio is not None]
        margins = [r.min_margin for r in records if r.min_margin is not None]
        times = [r.ms for r in records if r.ms is not None]
        min_margin = repr(min(margins)) if margins else ""
        w.writerow(["summary", "", "", "", "max", "", "", repr(max(ratios)) if ratios else "", f"{max(times):.3f}" if times else "", min_margin])
        w.writerow(["summary", "", "", "", "mean", "", "", repr(sum(ratios) / len(ratios)) if ratios else "", f"{sum(times) / len(times):.3f}" if times else "", ""])
    exit_code = 0 if all(r.audit_passed for r in records) else 2
    return BenchResult(records, buf.getvalue(), exit_code)
