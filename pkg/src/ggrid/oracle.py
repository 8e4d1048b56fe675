"""Brute-force optima and checkers for the proved bounds.

`exact_ggmst` and `exact_ggtsp` enumerate every way of picking one point
per cell (cell 0 is the most significant digit) and solve the plain
MST/TSP on each pick. The heavy loop lives in the kernels; the winning
pick is then rebuilt here with the ordinary graph routines.

The ``verify_*`` helpers turn one inequality into an `AuditEntry` whose
margin is ``bound - achieved``; an entry passes when the margin is at least
``-1e-9``.
"""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

import numpy as np

from . import kernels
from .errors import InfeasibleOracleError, InvalidArgumentError
from .geometry import Instance, euclid, pairwise_distances
from .ggmst import (
    APPROX_ADDITIVE,
    APPROX_RATIO,
    SQRT2,
    TOL,
    GgmstSolution,
    _lowest_within_tol,
    single_cell_solution,
)
from .ggtsp import Tour
from .graph import mst

DEFAULT_SELECTION_CAP = 10**6
HELD_KARP_MAX_CELLS = 12

LEMMA_THRESHOLDS = {
    4: 1.0,
    7: (2 * math.sqrt(6) + math.sqrt(6 - 3 * math.sqrt(3))) / 3,
    8: 2.0,
    9: 1 + math.sqrt(3),
}


def _selection(inst: Instance, rank: int) -> list[int]:
    digits = np.unravel_index(rank, tuple(inst.cell_sizes))
    return [inst.cell_points(c)[int(d)] for c, d in enumerate(digits)]


def _check_cap(inst: Instance, cap: int) -> None:
    count = inst.selection_count()
    if count > cap:
        raise InfeasibleOracleError(f"{count} point selections exceed the oracle cap {cap}")


def exact_ggmst(inst: Instance, cap: int = DEFAULT_SELECTION_CAP, backend: str | None = None) -> GgmstSolution:
    """Optimal GGMST by trying every selection.

    Raises:
        InfeasibleOracleError: if the product of cell sizes exceeds `cap`.
    """
    _check_cap(inst, cap)
    if inst.k == 1:
        return single_cell_solution(inst)
    weights = kernels.selection_mst_weights(inst.packed_distances, inst.offsets, backend)
    sel = _selection(inst, _lowest_within_tol(weights))
    pts = inst.points
    tree = mst(inst.k, lambda a, b: euclid(pts[sel[a]], pts[sel[b]]))
    chosen = dict(zip(inst.cell_order, sel))
    return GgmstSolution.build(inst, chosen, [(sel[e.u], sel[e.v]) for e in tree.edges])


def held_karp(d: np.ndarray) -> tuple[float, list[int]]:
    """Optimal closed tour over all rows of `d`, starting at node 0."""
    k = len(d)
    if k == 1:
        return 0.0, [0]
    if k == 2:
        return float(d[0, 1] + d[1, 0]), [0, 1]
    m = k - 1
    full = (1 << m) - 1
    dp = np.full((full + 1, m), np.inf)
    par = np.full((full + 1, m), -1, dtype=np.intp)
    for j in range(m):
        dp[1 << j, j] = d[0, j + 1]
    for mask in range(1, full + 1):
        bits = [b for b in range(m) if mask >> b & 1]
        if len(bits) < 2:
            continue
        for j in bits:
            prev = mask ^ (1 << j)
            js = np.array([b for b in bits if b != j])
            cand = dp[prev, js] + d[js + 1, j + 1]
            a = int(np.argmin(cand))
            dp[mask, j] = cand[a]
            par[mask, j] = js[a]
    final = dp[full] + d[1:, 0]
    j = int(np.argmin(final))
    weight = float(final[j])
    path = []
    mask = full
    while j >= 0:
        path.append(j + 1)
        nxt = int(par[mask, j])
        mask ^= 1 << j
        j = nxt
    return weight, [0] + path[::-1]


def exact_ggtsp(inst: Instance, cap: int = DEFAULT_SELECTION_CAP, backend: str | None = None) -> Tour:
    """Optimal GGTSP tour: Held-Karp on every selection.

    Raises:
        InfeasibleOracleError: over the selection cap or above 12 cells.
    """
    _check_cap(inst, cap)
    if inst.k > HELD_KARP_MAX_CELLS:
        raise InfeasibleOracleError(f"{inst.k} cells exceed the Held-Karp limit {HELD_KARP_MAX_CELLS}")
    if inst.k == 1:
        return Tour.build(inst, [inst.cell_points(0)[0]])
    weights = kernels.selection_tour_weights(inst.packed_distances, inst.offsets, backend)
    sel = _selection(inst, _lowest_within_tol(weights))
    _, order = held_karp(pairwise_distances(inst.xy[sel]))
    return Tour.build(inst, [sel[i] for i in order])


def tsp_work(inst: Instance) -> int:
    k = inst.k
    return inst.selection_count() * (1 << max(k - 1, 0)) * max(k - 1, 1) ** 2


@dataclass
class AuditEntry:
    check: str
    passed: bool
    margin: float
    witness: object = None
    note: str = ""
    skipped: bool = False


@dataclass
class AuditReport:
    entries: list[AuditEntry] = field(default_factory=list)

    def add(self, entry: AuditEntry) -> AuditEntry:
        self.entries.append(entry)
        return entry

    def extend(self, entries: Iterable[AuditEntry]) -> None:
        self.entries.extend(entries)

    @property
    def passed(self) -> bool:
        return all(e.passed for e in self.entries)

    @property
    def min_margin(self) -> float:
        margins = [e.margin for e in self.entries if not e.skipped]
        return min(margins) if margins else math.inf

    def failures(self) -> list[AuditEntry]:
        return [e for e in self.entries if not e.passed]

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["check", "passed", "margin", "note"])
        for e in self.entries:
            margin = "" if e.skipped else repr(e.margin)
            w.writerow([e.check, int(e.passed), margin, e.note])
        return buf.getvalue()


def bound_entry(check: str, achieved: float, bound: float, witness=None, note: str = "") -> AuditEntry:
    margin = bound - achieved
    return AuditEntry(check, margin >= -TOL, margin, None if margin >= -TOL else witness, note)


def _same_cells(a: GgmstSolution, b: GgmstSolution) -> None:
    if set(a.chosen) != set(b.chosen):
        raise InvalidArgumentError("solutions belong to different instances")


def verify_theorem1(approx: GgmstSolution, opt: GgmstSolution, N: int) -> AuditEntry:
    """``w(approx) <= w(opt) + sqrt(2)*N - sqrt(2)``; vacuous for N = 0."""
    _same_cells(approx, opt)
    if N != len(approx.edges):
        raise InvalidArgumentError(f"N={N} but the solution has {len(approx.edges)} edges")
    if N == 0:
        return AuditEntry("theorem1", True, 0.0, note="N=0")
    return bound_entry("theorem1", approx.weight, opt.weight + SQRT2 * N - SQRT2, approx.edges)


def verify_corollary1(approx: GgmstSolution, opt: GgmstSolution) -> AuditEntry:
    """``w(approx) <= (1 + 4*sqrt(2)) * w(opt) + 2*sqrt(2)``."""
    _same_cells(approx, opt)
    return bound_entry("corollary1", approx.weight, APPROX_RATIO * opt.weight + APPROX_ADDITIVE, approx.edges)


def verify_g0_bound(g0_weight: float, opt: GgmstSolution) -> AuditEntry:
    """The cell-level MST edge set never outweighs the optimum."""
    return bound_entry("g0-below-opt", g0_weight, opt.weight)


def verify_lower_bound(sol: GgmstSolution) -> AuditEntry:
    """``N <= 4*w + 3``; holds for every feasible tree since ``w >= OPT``."""
    N = len(sol.edges)
    return bound_entry("lower-bound", N, 4 * sol.weight + 3, sol.edges)


def connected_subsets(adj: Sequence[Sequence[int]], size: int) -> Iterator[frozenset[int]]:
    """Every connected node set of `size` nodes, once each (ESU enumeration)."""
    n = len(adj)

    def extend(sub: set[int], frontier: set[int], nbhd: set[int], root: int):
        if len(sub) == size:
            yield frozenset(sub)
            return
        frontier = set(frontier)
        while frontier:
            w = min(frontier)
            frontier.discard(w)
            fresh = {u for u in adj[w] if u > root and u not in sub and u not in nbhd}
            sub.add(w)
            yield from extend(sub, frontier | fresh, nbhd | fresh | {w}, root)
            sub.discard(w)

    for v in range(n):
        nb = {u for u in adj[v] if u > v}
        yield from extend({v}, nb, set(adj[v]) | {v}, v)


def audit_subtree_lemmas(
    inst: Instance,
    sol: GgmstSolution,
    sizes: Iterable[int] = (4, 7, 8, 9),
    sample_cap: int = 10**5,
) -> AuditReport:
    """Check the small-subtree weight floors on every connected subtree of `sol`.

    For each requested edge count ``e`` the subtrees with ``e`` edges are
    enumerated in a fixed order, at most `sample_cap` of them, and each must
    weigh at least ``LEMMA_THRESHOLDS[e] - 1e-9``.
    """
    nodes = [sol.chosen[c] for c in inst.cell_order]
    local = {p: i for i, p in enumerate(nodes)}
    adj: list[list[int]] = [[] for _ in nodes]
    wmap: dict[tuple[int, int], float] = {}
    for p, q in sol.edges:
        a, b = local[p], local[q]
        adj[a].append(b)
        adj[b].append(a)
        wmap[(min(a, b), max(a, b))] = euclid(inst.points[p], inst.points[q])
    report = AuditReport()
    for e in sorted(set(sizes)):
        if e not in LEMMA_THRESHOLDS:
            raise InvalidArgumentError(f"no subtree bound for {e} edges; have {sorted(LEMMA_THRESHOLDS)}")
        name = f"lemma-{e}-edges"
        if e > len(sol.edges):
            report.add(AuditEntry(name, True, math.nan, note=f"skipped: tree has {len(sol.edges)} edges", skipped=True))
            continue
        threshold = LEMMA_THRESHOLDS[e]
        worst, witness, seen = math.inf, None, 0
        for subset in connected_subsets(adj, e + 1):
            if seen >= sample_cap:
                break
            seen += 1
            inner = [(a, b) for (a, b) in wmap if a in subset and b in subset]
            w = math.fsum(wmap[ab] for ab in inner)
            if w - threshold < worst:
                worst = w - threshold
                witness = [(nodes[a], nodes[b]) for a, b in inner]
        truncated = seen >= sample_cap
        note = f"{seen} subtrees" + (" (capped)" if truncated else "")
        ok = worst >= -TOL
        report.add(AuditEntry(name, ok, worst, None if ok else witness, note))
    return report


__all__ = [
    "AuditEntry",
    "AuditReport",
    "DEFAULT_SELECTION_CAP",
    "HELD_KARP_MAX_CELLS",
    "LEMMA_THRESHOLDS",
    "audit_subtree_lemmas",
    "bound_entry",
    "connected_subsets",
    "exact_ggmst",
    "exact_ggtsp",
    "held_karp",
    "tsp_work",
    "verify_corollary1",
    "verify_g0_bound",
    "verify_lower_bound",
    "verify_theorem1",
]
