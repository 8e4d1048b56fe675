import math

import pytest

import brute
from ggrid.errors import CapExceededError, InfeasibleSolutionError, InvalidArgumentError, ParityError
from ggrid.geometry import build_instance, euclid, min_cell_edge
from ggrid.ggmst import SolverConfig, approx_ggmst, check_ggmst, solve_ggmst
from ggrid.ggtsp import (
    TAG_APPROX,
    TAG_EXACT,
    TAG_FALLBACK,
    Tour,
    check_tour,
    christofides_parts,
    christofides_tour,
    double_tree_tour,
    min_perfect_matching,
    solve_ggtsp,
    tour_to_tree,
    tour_weight,
)
from ggrid.graph import euler_tour
from suites import random_points, small_suite


def test_tour_weight_includes_closing_edge():
    inst = build_instance([(0.5, 0.5), (1.5, 0.5), (2.5, 0.5)])
    assert tour_weight(inst, [0, 1, 2]) == pytest.approx(4.0)
    assert tour_weight(inst, [0]) == 0.0
    assert tour_weight(inst, [0, 2]) == pytest.approx(4.0)


def test_double_tree_single_cell():
    inst = build_instance([(0.5, 0.5), (0.7, 0.2)])
    tour = double_tree_tour(inst, approx_ggmst(inst))
    assert tour.weight == 0 and len(tour.order) == 1


def test_double_tree_collinear_path():
    inst = build_instance([(0.5, 0.5), (1.5, 0.5), (2.5, 0.5)])
    t = approx_ggmst(inst)
    tour = double_tree_tour(inst, t)
    assert tour.order == (0, 1, 2)
    assert tour.weight == pytest.approx(1 + 1 + 2)


def test_double_tree_within_twice_tree(rng):
    for _ in range(50):
        inst = build_instance(random_points(rng, int(rng.integers(1, 8))))
        t = solve_ggmst(inst).solution
        tour = double_tree_tour(inst, t)
        check_tour(inst, tour)
        assert tour.weight <= 2 * t.weight + 1e-9
        assert tour.order[0] == t.chosen[inst.cell_order[0]]


def test_shortcut_never_longer_than_walk(rng):
    from ggrid.ggtsp import _tree_nodes
    from ggrid.graph import doubled

    for _ in range(20):
        inst = build_instance(random_points(rng, 6))
        t = approx_ggmst(inst)
        nodes, tree = _tree_nodes(inst, t)
        walk = euler_tour(doubled(tree), 0)
        walk_w = sum(euclid(inst.points[nodes[a]], inst.points[nodes[b]]) for a, b in zip(walk, walk[1:]))
        assert double_tree_tour(inst, t).weight <= walk_w + 1e-12
        assert walk_w == pytest.approx(2 * t.weight, abs=1e-9)


def test_matching_single_pair():
    m = min_perfect_matching([3, 7], lambda a, b: 2.5)
    assert m.pairs == ((3, 7),) and m.weight == 2.5


def test_matching_rectangle_short_sides():
    # centres at the corners of a 3 x 1 rectangle
    inst = build_instance([(0.5, 0.5), (3.5, 0.5), (0.5, 1.5), (3.5, 1.5)])
    w = lambda a, b: euclid(inst.points[inst.cell_points(a)[0]], inst.points[inst.cell_points(b)[0]])
    m = min_perfect_matching(range(4), w)
    pairs = {tuple(sorted((inst.cell_order[a], inst.cell_order[b]))) for a, b in m.pairs}
    assert pairs == {((0, 0), (0, 1)), ((3, 0), (3, 1))}
    assert m.weight == pytest.approx(2.0)


def test_matching_vs_pairings_eight(rng):
    for _ in range(10):
        xy = rng.random((8, 2)) * 5
        d = [[math.hypot(*(xy[a] - xy[b])) for b in range(8)] for a in range(8)]
        m = min_perfect_matching(list(range(8)), lambda a, b: d[a][b])
        assert m.weight == pytest.approx(brute.matching_weight(d, range(8)), abs=1e-9)


def test_matching_errors():
    with pytest.raises(ParityError):
        min_perfect_matching([0, 1, 2], lambda a, b: 1.0)
    with pytest.raises(CapExceededError):
        min_perfect_matching(list(range(6)), lambda a, b: 1.0, cap=4)


def test_christofides_parts_invariants(rng):
    for _ in range(60):
        inst = build_instance(random_points(rng, int(rng.integers(2, 9)), extent=4))
        parts = christofides_parts(inst)
        assert len(parts.odd_cells) % 2 == 0
        covered = sorted(v for p in parts.matching.pairs for v in p)
        assert covered == sorted(parts.odd_cells)
        assert parts.multigraph.is_eulerian()
        assert all(d % 2 == 0 for d in parts.multigraph.degrees())
        assert parts.tree == approx_ggmst(inst)


def test_christofides_path_tree_forced_matching():
    inst = build_instance([(0.5, 0.5), (1.5, 0.5), (2.5, 0.5), (3.5, 0.5)])
    parts = christofides_parts(inst)
    assert parts.odd_cells == (0, 3)
    assert parts.matching.pairs == ((0, 3),)
    tour, tag = christofides_tour(inst)
    assert tag == TAG_APPROX
    assert tour.weight == pytest.approx(6.0)


def test_christofides_triangle_is_optimal():
    pts = [(0.5, 0.5), (2.5, 0.3), (1.2, 2.7)]
    inst = build_instance(pts)
    tour, _ = christofides_tour(inst)
    assert sorted(tour.order) == [0, 1, 2]
    assert tour.weight == pytest.approx(brute.ggtsp_weight(pts), abs=1e-12)


def test_christofides_fallback_over_cap():
    # the cell tree here has four odd-degree cells, more than a cap of two
    pts = [(2.5, 2.5), (0.5, 2.5), (4.5, 2.5), (2.5, 0.5), (2.5, 4.5), (4.5, 4.5)]
    inst = build_instance(pts)
    assert len(christofides_parts(inst).odd_cells) == 4
    tour, tag = christofides_tour(inst, matching_cap=2)
    assert tag == TAG_FALLBACK
    assert tour == double_tree_tour(inst, approx_ggmst(inst))
    check_tour(inst, tour)


def test_christofides_single_cell():
    inst = build_instance([(0.2, 0.2), (0.8, 0.8)])
    tour, _ = christofides_tour(inst)
    assert tour.weight == 0 and tour.order == (0,)


def test_tour_to_tree_gives_feasible_lower_bound(rng):
    for inst in small_suite(20, (2, 7), seed=4):
        tour, _ = christofides_tour(inst)
        tree = tour_to_tree(inst, tour)
        check_ggmst(inst, tree)
        assert tree.weight <= tour.weight + 1e-12
        assert solve_ggmst(inst).solution.weight <= tour.weight + 1e-9


def test_check_tour_rejects_bad_tours():
    inst = build_instance([(0.5, 0.5), (0.6, 0.6), (1.5, 0.5)])
    check_tour(inst, Tour.build(inst, [0, 2]))
    with pytest.raises(InfeasibleSolutionError):
        check_tour(inst, Tour.build(inst, [0, 1, 2]))
    with pytest.raises(InfeasibleSolutionError):
        check_tour(inst, Tour.build(inst, [0]))
    with pytest.raises(InfeasibleSolutionError):
        check_tour(inst, Tour((0, 2), 0.5))


def test_solve_two_cells_exact():
    inst = build_instance([(0.1, 0.5), (0.9, 0.5), (1.2, 0.5), (1.9, 0.9)])
    tour, tag = solve_ggtsp(inst)
    assert tag == TAG_EXACT
    assert tour.weight == 2 * min_cell_edge(inst, 0, 1)[0]


def test_solve_exact_branch_matches_brute_force(rng):
    for _ in range(5):
        pts = random_points(rng, 6, (1, 2))
        tour, tag = solve_ggtsp(build_instance(pts))
        assert tag == TAG_EXACT
        assert tour.weight == pytest.approx(brute.ggtsp_weight(pts), abs=1e-9)


def test_solve_variants_and_errors():
    big = build_instance([(i + 0.5, (i % 3) + 0.5) for i in range(20)])
    dt, tag = solve_ggtsp(big, variant="double-tree")
    assert tag == TAG_APPROX
    ch, tag2 = solve_ggtsp(big, variant="christofides")
    assert tag2 == TAG_APPROX
    check_tour(big, dt)
    check_tour(big, ch)
    with pytest.raises(InvalidArgumentError):
        solve_ggtsp(big, variant="greedy")
    small = build_instance([(0.5, 0.5), (1.5, 0.5), (2.5, 0.5)])
    assert solve_ggtsp(small, SolverConfig(tsp_work_cap=0)).tag == TAG_APPROX
