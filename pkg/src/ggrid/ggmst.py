"""Generalized MST on grid clusters.

Three layers:

* `cell_level_mst` + `median_merge`: the fast approximation. An MST over
  cells (cell distance = shortest point pair) gives the edge set G0, then
  every cell touched by several G0 endpoints is collapsed onto a median
  point. Its weight stays within ``sqrt(2) * (N - 1)`` of optimal.
* `dp_cell_tree`: the cheapest point realization of a fixed cell tree.
* `solve_ggmst`: the epsilon wrapper. Small instances are solved exactly
  (enumerate every cell tree and run the DP); large ones fall back to the
  approximation, and the returned tag says which guarantee applies.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping, NamedTuple, Sequence

import numpy as np

from . import kernels
from .errors import InfeasibleSolutionError, InvalidArgumentError
from .geometry import CellId, Instance, cell_distance_table, euclid, pairwise_distances
from .graph import (
    DEFAULT_ENUMERATION_CAP,
    TreeGraph,
    mst,
    prufer_decode,
    prufer_trees,
)

TOL = 1e-9
SQRT2 = math.sqrt(2.0)
APPROX_RATIO = 1 + 4 * SQRT2
APPROX_ADDITIVE = 2 * SQRT2

TAG_EXACT_ENUMERATION = "exact-enumeration"
TAG_EXACT_SELECTION = "exact-selection"
TAG_HEURISTIC = "heuristic-no-guarantee"
TAG_APPROX = "approx"

# Nodes are positions in Instance.cell_order.
CellTree = TreeGraph


@dataclass(frozen=True)
class SolverConfig:
    """Thresholds for choosing between exact and approximate branches.

    Attributes:
        epsilon: Target slack; instances with ``N <= max(15, 10*sqrt(2)/epsilon)``
            are solved exactly when the caps allow it.
        enumeration_cap: Largest cell count for which all ``k**(k-2)`` cell
            trees are enumerated.
        exact_fallback_cap: Largest product of cell sizes the brute-force
            selection oracle accepts.
        matching_cap: Largest odd-degree set matched exactly in the
            Christofides variant.
        tsp_work_cap: Bound on ``selections * 2**(k-1) * (k-1)**2`` for the
            exact tour oracle.
    """

    epsilon: float = 1.0
    enumeration_cap: int = DEFAULT_ENUMERATION_CAP
    exact_fallback_cap: int = 10**6
    matching_cap: int = 20
    tsp_work_cap: int = 5 * 10**7

    def __post_init__(self):
        if not (self.epsilon > 0 and math.isfinite(self.epsilon)):
            raise InvalidArgumentError(f"epsilon must be positive, got {self.epsilon}")
        for name in ("enumeration_cap", "exact_fallback_cap", "matching_cap", "tsp_work_cap"):
            if getattr(self, name) < 0:
                raise InvalidArgumentError(f"{name} must be non-negative")

    @property
    def small_n_threshold(self) -> float:
        return max(15.0, 10 * SQRT2 / self.epsilon)

    def is_small(self, N: int) -> bool:
        return N <= self.small_n_threshold


@dataclass(frozen=True)
class GgmstSolution:
    """One point per non-empty cell plus a spanning tree on those points.

    Attributes:
        chosen: Cell -> index of its selected point.
        edges: Tree edges as point-index pairs.
        weight: Sum of Euclidean edge lengths.
    """

    chosen: Mapping[CellId, int]
    edges: tuple[tuple[int, int], ...]
    weight: float

    @classmethod
    def build(cls, inst: Instance, chosen: Mapping[CellId, int], edges) -> "GgmstSolution":
        edges = tuple((int(p), int(q)) for p, q in edges)
        pts = inst.points
        weight = math.fsum(euclid(pts[p], pts[q]) for p, q in edges)
        ordered = {c: int(chosen[c]) for c in inst.cell_order}
        return cls(chosen=ordered, edges=edges, weight=weight)

    @property
    def N(self) -> int:
        return len(self.edges)

    def edge_weights(self, inst: Instance) -> list[float]:
        return [euclid(inst.points[p], inst.points[q]) for p, q in self.edges]


class Solved(NamedTuple):
    solution: object
    tag: str


def check_ggmst(inst: Instance, sol: GgmstSolution, tol: float = TOL) -> None:
    """Raise InfeasibleSolutionError unless `sol` is a feasible tree for `inst`."""
    if set(sol.chosen) != set(inst.cell_order):
        raise InfeasibleSolutionError("chosen cells differ from the non-empty cells")
    for c, p in sol.chosen.items():
        if inst.point_cell[p] != inst.cell_index[c]:
            raise InfeasibleSolutionError(f"point {p} is not in cell {tuple(c)}")
    if len(sol.edges) != inst.N:
        raise InfeasibleSolutionError(f"{len(sol.edges)} edges, expected {inst.N}")
    nodes = {p: i for i, p in enumerate(sol.chosen[c] for c in inst.cell_order)}
    try:
        TreeGraph.from_pairs(inst.k, [(nodes[p], nodes[q]) for p, q in sol.edges])
    except KeyError as exc:
        raise InfeasibleSolutionError(f"edge uses unchosen point {exc}") from None
    except Exception as exc:
        raise InfeasibleSolutionError(f"edges do not form a spanning tree: {exc}") from None
    recomputed = math.fsum(sol.edge_weights(inst))
    if abs(recomputed - sol.weight) > tol:
        raise InfeasibleSolutionError(f"stored weight {sol.weight} != {recomputed}")


def is_feasible(inst: Instance, sol: GgmstSolution) -> bool:
    try:
        check_ggmst(inst, sol)
    except InfeasibleSolutionError:
        return False
    return True


def single_cell_solution(inst: Instance) -> GgmstSolution:
    c = inst.cell_order[0]
    return GgmstSolution.build(inst, {c: inst.cells[c][0]}, ())


def cell_level_mst(inst: Instance) -> tuple[CellTree, list[tuple[int, int]]]:
    """MST over cells and the point pairs (G0) realizing its edges.

    G0 may use several points of one cell, so it is generally infeasible.
    """
    w, pairs = cell_distance_table(inst)
    tree = mst(inst.k, lambda a, b: float(w[a, b]))
    g0 = []
    for e in tree.edges:
        a, b = e.key
        g0.append((int(pairs[a, b, 0]), int(pairs[a, b, 1])))
    return tree, g0


def g0_weight(inst: Instance, g0: Sequence[tuple[int, int]]) -> float:
    return math.fsum(euclid(inst.points[p], inst.points[q]) for p, q in g0)


def _lowest_within_tol(values: np.ndarray) -> int:
    return int(np.flatnonzero(values <= values.min() + TOL)[0])


def g0_endpoints_by_cell(inst: Instance, g0) -> dict[int, list[int]]:
    ends: dict[int, set[int]] = {}
    for p, q in g0:
        for x in (p, q):
            ends.setdefault(inst.point_cell[x], set()).add(x)
    return {c: sorted(s) for c, s in ends.items()}


def median_merge(inst: Instance, cell_tree: CellTree, g0) -> GgmstSolution:
    """Collapse every cell's G0 endpoints onto one median point.

    The endpoint sets are read from the original `g0`, so cells are treated
    independently. Candidates are all points of the cell; near-ties within
    1e-9 go to the lowest point index.
    """
    if inst.k == 1:
        return single_cell_solution(inst)
    ends = g0_endpoints_by_cell(inst, g0)
    rep: dict[int, int] = {}
    chosen: dict[CellId, int] = {}
    for pos, c in enumerate(inst.cell_order):
        cg = ends[pos]
        if len(cg) == 1:
            chosen[c] = cg[0]
            continue
        cands = inst.cells[c]
        sums = pairwise_distances(inst.xy[list(cands)], inst.xy[cg]).sum(axis=1)
        p = cands[_lowest_within_tol(sums)]
        chosen[c] = p
        for x in cg:
            rep[x] = p
    edges = [(rep.get(p, p), rep.get(q, q)) for p, q in g0]
    return GgmstSolution.build(inst, chosen, edges)


def approx_ggmst(inst: Instance) -> GgmstSolution:
    """Cell-level MST followed by median merging."""
    tree, g0 = cell_level_mst(inst)
    return median_merge(inst, tree, g0)


def dp_cell_tree(inst: Instance, t: CellTree, root: int = 0) -> GgmstSolution:
    """Cheapest feasible tree whose cell adjacency is exactly `t`.

    Bottom-up over `t` rooted at `root` (default: first cell): leaves start
    at zero, and each point ``p`` of a parent cell accumulates, per child,
    ``min_q W(q) + |pq|``. Back-pointers recover the selection; exact ties
    go to the lowest point index.
    """
    if t.k != inst.k:
        raise InvalidArgumentError(f"cell tree has {t.k} nodes, instance has {inst.k} cells")
    if inst.k == 1:
        return single_cell_solution(inst)
    order, parent = t.rooted(root)
    pts = [np.asarray(inst.cell_points(c)) for c in range(inst.k)]
    W = [np.zeros(len(p)) for p in pts]
    back: list[np.ndarray | None] = [None] * inst.k
    for c in reversed(order[1:]):
        par = parent[c]
        cost = pairwise_distances(inst.xy[pts[par]], inst.xy[pts[c]]) + W[c][None, :]
        arg = np.argmin(cost, axis=1)
        back[c] = arg
        W[par] = W[par] + cost[np.arange(len(arg)), arg]
    sel = [0] * inst.k
    sel[root] = int(np.argmin(W[root]))
    for c in order[1:]:
        sel[c] = int(back[c][sel[parent[c]]])
    chosen = {inst.cell_order[c]: int(pts[c][sel[c]]) for c in range(inst.k)}
    edges = [
        (int(pts[parent[c]][sel[parent[c]]]), int(pts[c][sel[c]])) for c in order[1:]
    ]
    return GgmstSolution.build(inst, chosen, edges)


def best_cell_tree(inst: Instance, cap: int = DEFAULT_ENUMERATION_CAP) -> tuple[CellTree, float]:
    """Cell tree whose DP optimum is smallest, over all ``k**(k-2)`` trees.

    Uses the compiled kernel when available. The first tree in Prüfer order
    within 1e-9 of the minimum wins.
    """
    k = inst.k
    if k < 2:
        raise InvalidArgumentError("tree enumeration needs at least two cells")
    # prufer_trees enforces the cap and the k >= 2 precondition
    next(prufer_trees(k, cap))
    weights = kernels.prufer_dp_weights(inst.packed_distances, inst.offsets)
    rank = _lowest_within_tol(weights)
    seq = np.unravel_index(rank, (k,) * (k - 2)) if k > 2 else ()
    tree = TreeGraph.from_pairs(k, prufer_decode([int(s) for s in seq], k))
    return tree, float(weights[rank])


def enumerate_exact(inst: Instance, cap: int = DEFAULT_ENUMERATION_CAP) -> GgmstSolution:
    if inst.k == 1:
        return single_cell_solution(inst)
    tree, _ = best_cell_tree(inst, cap)
    return dp_cell_tree(inst, tree)


def enumerate_exact_reference(inst: Instance, cap: int = DEFAULT_ENUMERATION_CAP) -> GgmstSolution:
    """Slow path: `dp_cell_tree` on every tree from `prufer_trees`."""
    if inst.k == 1:
        return single_cell_solution(inst)
    best = None
    for t in prufer_trees(inst.k, cap):
        sol = dp_cell_tree(inst, t)
        if best is None or sol.weight < best.weight - TOL:
            best = sol
    return best


def solve_ggmst(inst: Instance, cfg: SolverConfig | None = None) -> Solved:
    """Epsilon-approximate GGMST with a provenance tag.

    Tags: ``exact-enumeration`` (all cell trees + DP), ``exact-selection``
    (brute force over point selections), ``approx`` (guarantee
    ``(1 + 4*sqrt(2) + epsilon) * OPT``) and ``heuristic-no-guarantee``
    (small N but both exact routes over their caps).
    """
    from .oracle import exact_ggmst

    cfg = cfg or SolverConfig()
    if inst.k == 1:
        return Solved(single_cell_solution(inst), TAG_EXACT_ENUMERATION)
    if cfg.is_small(inst.N):
        if inst.k <= cfg.enumeration_cap:
            return Solved(enumerate_exact(inst, cfg.enumeration_cap), TAG_EXACT_ENUMERATION)
        if inst.selection_count() <= cfg.exact_fallback_cap:
            return Solved(exact_ggmst(inst, cfg.exact_fallback_cap), TAG_EXACT_SELECTION)
        return Solved(approx_ggmst(inst), TAG_HEURISTIC)
    return Solved(approx_ggmst(inst), TAG_APPROX)


def restricted_weight(inst: Instance, t: CellTree, selection: Sequence[int]) -> float:
    """Weight of the realization of `t` picking point ``selection[c]`` in cell ``c``."""
    pts = inst.points
    return math.fsum(euclid(pts[selection[e.u]], pts[selection[e.v]]) for e in t.edges)


__all__ = [
    "APPROX_ADDITIVE",
    "APPROX_RATIO",
    "CellTree",
    "GgmstSolution",
    "Solved",
    "SolverConfig",
    "TAG_APPROX",
    "TAG_EXACT_ENUMERATION",
    "TAG_EXACT_SELECTION",
    "TAG_HEURISTIC",
    "approx_ggmst",
    "best_cell_tree",
    "cell_level_mst",
    "check_ggmst",
    "dp_cell_tree",
    "enumerate_exact",
    "enumerate_exact_reference",
    "g0_weight",
    "is_feasible",
    "median_merge",
    "restricted_weight",
    "solve_ggmst",
]
