"""Generalized TSP on grid clusters, built on the GGMST trees.

Two tours are available:

* double tree: double every edge of a GGMST tree, walk an Euler tour, and
  skip repeated points;
* Christofides style: add a minimum perfect matching between the cells
  whose tree vertex has odd degree, then walk and shortcut as above.

`solve_ggtsp` solves small instances exactly and otherwise runs the chosen
variant.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from . import kernels
from .errors import CapExceededError, InfeasibleSolutionError, InvalidArgumentError, ParityError
from .geometry import Instance, cell_distance_table, euclid
from .ggmst import TOL, SQRT2, GgmstSolution, Solved, SolverConfig, approx_ggmst, solve_ggmst
from .graph import Multigraph, TreeGraph, doubled, euler_tour, shortcut

DOUBLE_TREE_RATIO = 2 + 8 * SQRT2
DOUBLE_TREE_ADDITIVE = 4 * SQRT2
CHRISTOFIDES_RATIO = 1.5 + 8 * SQRT2
CHRISTOFIDES_ADDITIVE = 5 * SQRT2

TAG_EXACT = "exact"
TAG_APPROX = "approx"
TAG_FALLBACK = "approx-double-tree-fallback"

VARIANTS = ("double-tree", "christofides")


@dataclass(frozen=True)
class Tour:
    """Cyclic order of point indices; the closing edge is implicit."""

    order: tuple[int, ...]
    weight: float

    @classmethod
    def build(cls, inst: Instance, order: Sequence[int]) -> "Tour":
        order = tuple(int(p) for p in order)
        return cls(order, tour_weight(inst, order))

    def edges(self) -> list[tuple[int, int]]:
        if len(self.order) < 2:
            return []
        return [(self.order[i], self.order[(i + 1) % len(self.order)]) for i in range(len(self.order))]


def tour_weight(inst: Instance, order: Sequence[int]) -> float:
    if len(order) < 2:
        return 0.0
    pts = inst.points
    return math.fsum(euclid(pts[order[i - 1]], pts[order[i]]) for i in range(len(order)))


def check_tour(inst: Instance, tour: Tour, tol: float = TOL) -> None:
    cells = [inst.point_cell[p] for p in tour.order]
    if sorted(cells) != list(range(inst.k)):
        raise InfeasibleSolutionError("tour must visit every non-empty cell exactly once")
    recomputed = tour_weight(inst, tour.order)
    if abs(recomputed - tour.weight) > tol:
        raise InfeasibleSolutionError(f"stored weight {tour.weight} != {recomputed}")


def tour_to_tree(inst: Instance, tour: Tour) -> GgmstSolution:
    """Drop the heaviest tour edge; what remains is a feasible GGMST path."""
    chosen = {inst.cell_order[inst.point_cell[p]]: p for p in tour.order}
    edges = tour.edges()
    if len(tour.order) == 2:
        edges = edges[:1]
    elif edges:
        pts = inst.points
        heavy = max(range(len(edges)), key=lambda i: euclid(pts[edges[i][0]], pts[edges[i][1]]))
        edges = edges[heavy + 1:] + edges[:heavy]
    return GgmstSolution.build(inst, chosen, edges)


def _tree_nodes(inst: Instance, t: GgmstSolution) -> tuple[list[int], TreeGraph]:
    nodes = [t.chosen[c] for c in inst.cell_order]
    local = {p: i for i, p in enumerate(nodes)}
    tree = TreeGraph.from_pairs(inst.k, [(local[p], local[q]) for p, q in t.edges])
    return nodes, tree


def _walk_to_tour(inst: Instance, nodes: Sequence[int], g: Multigraph) -> Tour:
    walk = euler_tour(g, 0)
    return Tour.build(inst, [nodes[v] for v in shortcut(walk)])


def double_tree_tour(inst: Instance, t: GgmstSolution) -> Tour:
    """Double the tree, Euler-walk from the first cell's point, keep first visits."""
    nodes, tree = _tree_nodes(inst, t)
    tour = _walk_to_tour(inst, nodes, doubled(tree))
    assert tour.weight <= 2 * t.weight + TOL, "shortcutting increased the weight"
    return tour


@dataclass(frozen=True)
class Matching:
    pairs: tuple[tuple[int, int], ...]
    weight: float


def min_perfect_matching(s: Sequence[int], dist: Callable[[int, int], float], cap: int = 20) -> Matching:
    """Exact minimum perfect matching on the nodes `s` (subset DP).

    Raises:
        ParityError: if ``len(s)`` is odd.
        CapExceededError: if ``len(s) > cap``.
    """
    s = list(s)
    if len(s) % 2:
        raise ParityError(f"cannot perfectly match {len(s)} nodes")
    if len(s) > cap:
        raise CapExceededError(f"{len(s)} nodes exceed the matching cap {cap}")
    m = len(s)
    d = np.zeros((m, m))
    for i in range(m):
        for j in range(i + 1, m):
            d[i, j] = d[j, i] = dist(s[i], s[j])
    weight, pairs = kernels.matching_dp(d)
    return Matching(tuple((s[i], s[j]) for i, j in pairs), weight)


@dataclass(frozen=True)
class ChristofidesParts:
    """Intermediate objects of the Christofides-style construction.

    Attributes:
        tree: The approximate GGMST tree T_G.
        odd_cells: Cell positions whose T_G vertex has odd degree.
        matching: Minimum perfect matching of `odd_cells` under cell distance.
        multigraph: T_G plus the matching, re-anchored to T_G's points,
            over cell positions.
    """

    tree: GgmstSolution
    odd_cells: tuple[int, ...]
    matching: Matching
    multigraph: Multigraph
    nodes: tuple[int, ...]


def christofides_parts(inst: Instance, matching_cap: int = 20) -> ChristofidesParts:
    tg = approx_ggmst(inst)
    nodes, tree = _tree_nodes(inst, tg)
    odd = tuple(v for v, d in enumerate(tree.degrees()) if d % 2)
    if len(odd) > matching_cap:
        raise CapExceededError(f"{len(odd)} odd-degree cells exceed the matching cap {matching_cap}")
    w, _ = cell_distance_table(inst)
    matching = min_perfect_matching(odd, lambda a, b: float(w[a, b]), matching_cap)
    edges = tuple(e.key for e in tree.edges) + matching.pairs
    return ChristofidesParts(tg, odd, matching, Multigraph(inst.k, edges), tuple(nodes))


def christofides_tour(inst: Instance, matching_cap: int = 20) -> Solved:
    """Christofides-style tour; falls back to the double tree over the matching cap.

    The matched edges join the T_G points of the matched cells, not the
    closest pair, so each can exceed the cell distance by up to 2*sqrt(2).
    """
    if inst.k == 1:
        return Solved(Tour.build(inst, [inst.cell_points(0)[0]]), TAG_APPROX)
    try:
        parts = christofides_parts(inst, matching_cap)
    except CapExceededError:
        return Solved(double_tree_tour(inst, approx_ggmst(inst)), TAG_FALLBACK)
    return Solved(_walk_to_tour(inst, parts.nodes, parts.multigraph), TAG_APPROX)


def exact_tour_feasible(inst: Instance, cfg: SolverConfig) -> bool:
    from .oracle import HELD_KARP_MAX_CELLS, tsp_work

    return (
        cfg.is_small(inst.N)
        and inst.k <= HELD_KARP_MAX_CELLS
        and inst.selection_count() <= cfg.exact_fallback_cap
        and tsp_work(inst) <= cfg.tsp_work_cap
    )


def solve_ggtsp(inst: Instance, cfg: SolverConfig | None = None, variant: str = "christofides") -> Solved:
    """GGTSP tour with a provenance tag (``exact``, ``approx`` or the fallback tag)."""
    from .oracle import exact_ggtsp

    if variant not in VARIANTS:
        raise InvalidArgumentError(f"unknown variant {variant!r}; choose from {VARIANTS}")
    cfg = cfg or SolverConfig()
    if exact_tour_feasible(inst, cfg):
        return Solved(exact_ggtsp(inst, cfg.exact_fallback_cap), TAG_EXACT)
    if variant == "double-tree":
        return Solved(double_tree_tour(inst, solve_ggmst(inst, cfg).solution), TAG_APPROX)
    return christofides_tour(inst, cfg.matching_cap)
