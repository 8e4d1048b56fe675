import math

import numpy as np
import pytest

import brute
from ggrid.errors import InfeasibleOracleError, InvalidArgumentError
from ggrid.geometry import build_instance
from ggrid.ggmst import SQRT2, GgmstSolution, approx_ggmst, check_ggmst
from ggrid.ggtsp import check_tour
from ggrid.oracle import (
    LEMMA_THRESHOLDS,
    AuditEntry,
    AuditReport,
    audit_subtree_lemmas,
    bound_entry,
    connected_subsets,
    exact_ggmst,
    exact_ggtsp,
    held_karp,
    tsp_work,
    verify_corollary1,
    verify_g0_bound,
    verify_lower_bound,
    verify_theorem1,
)
from suites import random_points, small_suite


def test_exact_ggmst_singletons_is_plain_mst(rng):
    pts = [(i + float(a), j + float(b)) for (i, j), (a, b) in zip([(0, 0), (2, 1), (1, 3), (3, 3), (0, 2)], rng.random((5, 2)))]
    sol = exact_ggmst(build_instance(pts))
    assert sol.weight == pytest.approx(brute.kruskal_weight(pts, range(5)), abs=1e-12)


def test_exact_ggmst_three_cells_two_points(rng):
    for _ in range(10):
        pts = random_points(rng, 3, (2, 2))
        inst = build_instance(pts)
        assert inst.selection_count() == 8
        sol = exact_ggmst(inst)
        check_ggmst(inst, sol)
        assert sol.weight == pytest.approx(brute.ggmst_weight(pts), abs=1e-9)


@pytest.mark.parametrize("backend", ["python", None])
def test_exact_ggmst_random_vs_brute(backend):
    for inst in small_suite(15, (2, 6), seed=11):
        sol = exact_ggmst(inst, backend=backend)
        assert sol.weight == pytest.approx(brute.ggmst_weight(inst.points), abs=1e-9)
        assert sol.weight <= approx_ggmst(inst).weight + 1e-9


def test_exact_ggmst_cap():
    inst = build_instance([(0.1, 0.1), (0.2, 0.2), (1.1, 0.1), (1.2, 0.2)])
    with pytest.raises(InfeasibleOracleError):
        exact_ggmst(inst, cap=3)
    assert exact_ggmst(inst, cap=4).N == 1


def test_exact_ggmst_single_cell():
    sol = exact_ggmst(build_instance([(0.5, 0.5), (0.1, 0.1)]))
    assert sol.weight == 0 and sol.edges == ()


def test_held_karp_vs_permutations(rng):
    for k in (1, 2, 3, 5, 7):
        xy = rng.random((k, 2)) * 4
        d = np.array([[math.hypot(*(xy[a] - xy[b])) for b in range(k)] for a in range(k)])
        w, order = held_karp(d)
        assert sorted(order) == list(range(k)) and order[0] == 0
        assert w == pytest.approx(sum(d[order[i - 1], order[i]] for i in range(k)) if k > 1 else 0.0)
        pts = [tuple(p) for p in xy]
        assert w == pytest.approx(brute.tsp_weight(pts, range(k)), abs=1e-9)


def test_exact_ggtsp_seven_singletons(rng):
    cells = [(0, 0), (1, 0), (2, 0), (0, 1), (2, 2), (1, 2), (0, 3)]
    pts = [(i + float(a), j + float(b)) for (i, j), (a, b) in zip(cells, rng.random((7, 2)))]
    tour = exact_ggtsp(build_instance(pts))
    # fix the first point, try the other 720 orders
    assert tour.weight == pytest.approx(brute.tsp_weight(pts, range(7)), abs=1e-9)


def test_exact_ggtsp_triangle():
    inst = build_instance([(0.5, 0.5), (0.1, 0.9), (1.5, 0.5), (0.5, 1.5)])
    tour = exact_ggtsp(inst)
    check_tour(inst, tour)
    assert tour.weight == pytest.approx(brute.ggtsp_weight(inst.points), abs=1e-12)


def test_exact_ggtsp_random_vs_brute():
    for inst in small_suite(12, (2, 6), (1, 2), seed=5):
        tour = exact_ggtsp(inst)
        check_tour(inst, tour)
        assert tour.weight == pytest.approx(brute.ggtsp_weight(inst.points), abs=1e-9)
        mst_w = exact_ggmst(inst).weight
        assert tour.weight >= mst_w - 1e-9
        assert tour.weight <= 2 * mst_w + 1e-9


def test_exact_ggtsp_limits():
    big = build_instance([(i + 0.5, 0.5) for i in range(13)])
    with pytest.raises(InfeasibleOracleError):
        exact_ggtsp(big)
    two = build_instance([(0.1, 0.1), (0.2, 0.2), (1.1, 0.1)])
    with pytest.raises(InfeasibleOracleError):
        exact_ggtsp(two, cap=1)
    assert tsp_work(two) == 2 * 2 * 1


def _sol(inst, weight_shift=0.0):
    s = approx_ggmst(inst)
    return GgmstSolution(s.chosen, s.edges, s.weight + weight_shift)


def test_verify_theorem1_degenerate_and_singletons():
    one = build_instance([(0.5, 0.5)])
    s = _sol(one)
    e = verify_theorem1(s, s, 0)
    assert e.passed and e.margin == 0
    line = build_instance([(i + 0.5, 0.5) for i in range(5)])
    s = _sol(line)
    e = verify_theorem1(s, s, line.N)
    assert e.passed
    assert e.margin == pytest.approx(SQRT2 * line.N - SQRT2)


def test_verify_theorem1_detects_violation_and_mismatch():
    line = build_instance([(i + 0.5, 0.5) for i in range(3)])
    opt = _sol(line)
    bad = _sol(line, weight_shift=SQRT2 * 2)
    e = verify_theorem1(bad, opt, 2)
    assert not e.passed and e.margin == pytest.approx(-SQRT2)
    assert e.witness is not None
    other = _sol(build_instance([(0.5, 0.5), (5.5, 5.5)]))
    with pytest.raises(InvalidArgumentError):
        verify_theorem1(opt, other, 2)
    with pytest.raises(InvalidArgumentError):
        verify_theorem1(opt, opt, 5)


def test_verify_corollary1_and_g0():
    line = build_instance([(i + 0.5, 0.5) for i in range(3)])
    opt = _sol(line)
    e = verify_corollary1(opt, opt)
    assert e.passed and e.margin == pytest.approx(4 * SQRT2 * opt.weight + 2 * SQRT2)
    assert verify_g0_bound(opt.weight, opt).passed
    assert not verify_g0_bound(opt.weight + 1e-6, opt).passed
    assert verify_g0_bound(opt.weight + 1e-10, opt).passed


def test_verify_lower_bound_examples():
    # N <= 3 passes whatever the weight
    for k in range(1, 5):
        inst = build_instance([(i + 0.5, 0.5) for i in range(k)])
        assert verify_lower_bound(GgmstSolution(_sol(inst).chosen, _sol(inst).edges, 0.0)).passed
    path = build_instance([(i + 0.5, 0.5) for i in range(5)])
    e = verify_lower_bound(_sol(path))
    assert e.passed and e.margin == pytest.approx(4 * 4 + 3 - 4)
    # a tree claiming too little weight for its edge count fails
    fake = GgmstSolution(_sol(path).chosen, _sol(path).edges, 0.1)
    assert not verify_lower_bound(fake).passed


def test_bound_entry_tolerance():
    assert bound_entry("x", 1.0 + 5e-10, 1.0).passed
    assert not bound_entry("x", 1.0 + 2e-9, 1.0).passed


def test_audit_report_csv():
    r = AuditReport()
    r.add(bound_entry("a", 1.0, 2.0))
    r.add(AuditEntry("b", True, math.nan, note="skipped: small", skipped=True))
    assert r.passed and r.min_margin == 1.0
    assert r.to_csv() == "check,passed,margin,note\na,1,1.0,\nb,1,,skipped: small\n"
    r.add(bound_entry("c", 3.0, 2.0))
    assert not r.passed and [e.check for e in r.failures()] == ["c"]


def test_connected_subsets_vs_combinations(rng):
    from ggrid.graph import TreeGraph, prufer_decode

    for _ in range(10):
        k = 9
        seq = [int(s) for s in rng.integers(0, k, size=k - 2)]
        t = TreeGraph.from_pairs(k, prufer_decode(seq, k))
        adj = [list(a) for a in t.adjacency]
        for size in range(1, k + 1):
            got = list(connected_subsets(adj, size))
            assert len(got) == len(set(got))
            assert set(got) == brute.connected_node_sets(adj, size)


def test_lemma_thresholds():
    assert LEMMA_THRESHOLDS[4] == 1.0
    assert LEMMA_THRESHOLDS[7] == pytest.approx(1.9319, abs=1e-4)
    assert LEMMA_THRESHOLDS[7] > 1.93
    assert LEMMA_THRESHOLDS[8] == 2.0
    assert LEMMA_THRESHOLDS[9] == pytest.approx(2.7321, abs=1e-4)
    # the seven-edge floor is the Fermat sum of a unit right isosceles triangle
    assert LEMMA_THRESHOLDS[7] == pytest.approx(math.sqrt(2 + math.sqrt(3)), abs=1e-12)


def test_lemma4_star_near_corner():
    e = 1e-4
    pts = [(1 - e, 1 - e), (1.0, 1 - e), (1 - e, 1.0), (1.0, 1.0), (2.0, 1.0)]
    inst = build_instance(pts)
    opt = exact_ggmst(inst)
    r = audit_subtree_lemmas(inst, opt, (4,))
    (entry,) = r.entries
    assert entry.passed
    assert 0 <= entry.margin < 1e-3


def test_lemma7_fermat_configuration_is_near_tight():
    e = 1e-6
    x = brute.fermat_point((1, 1), (2, 1), (1, 2))
    pts = [(1 - e, 1 - e), (2.0, 1 - e), (1 - e, 2.0), (2 - e, 1 - e), (2.0, 1.0), (1 - e, 2 - e), (1.0, 2.0), x]
    inst = build_instance(pts)
    assert inst.k == 8
    opt = exact_ggmst(inst)
    entry = {x.check: x for x in audit_subtree_lemmas(inst, opt, (7,)).entries}["lemma-7-edges"]
    assert entry.passed
    assert 0 <= entry.margin < 1e-4


def test_lemma8_three_by_three_block(rng):
    for _ in range(10):
        pts = [(i + float(a), j + float(b)) for i in range(3) for j in range(3) for a, b in [rng.random(2)]]
        inst = build_instance(pts)
        opt = exact_ggmst(inst)
        r = audit_subtree_lemmas(inst, opt, (4, 7, 8))
        assert r.passed
        entry = r.entries[-1]
        assert entry.check == "lemma-8-edges" and "1 subtrees" in entry.note


def test_lemma_audit_skips_large_sizes_and_rejects_unknown():
    inst = build_instance([(i + 0.5, 0.5) for i in range(5)])
    sol = approx_ggmst(inst)
    r = audit_subtree_lemmas(inst, sol, (4, 9))
    assert r.entries[0].passed and not r.entries[0].skipped
    assert r.entries[1].skipped and "skipped" in r.entries[1].note
    assert r.passed and r.min_margin == pytest.approx(3.0)
    with pytest.raises(InvalidArgumentError):
        audit_subtree_lemmas(inst, sol, (5,))


def test_lemma_audit_sample_cap():
    inst = build_instance([(i + 0.5, (i % 2) + 0.5) for i in range(12)])
    sol = approx_ggmst(inst)
    full = audit_subtree_lemmas(inst, sol, (4,)).entries[0]
    capped = audit_subtree_lemmas(inst, sol, (4,), sample_cap=3).entries[0]
    assert "capped" in capped.note and "capped" not in full.note
    assert capped.margin >= full.margin


def test_lemma_audit_flags_violation(monkeypatch):
    # distinct cells always clear the true floors, so raise one to force a failure
    inst = build_instance([(i + 0.5, 0.5) for i in range(5)])
    sol = approx_ggmst(inst)
    monkeypatch.setitem(LEMMA_THRESHOLDS, 4, 10.0)
    (entry,) = audit_subtree_lemmas(inst, sol, (4,)).entries
    assert not entry.passed
    assert entry.margin == pytest.approx(4.0 - 10.0)
    assert sorted(tuple(sorted(e)) for e in entry.witness) == sorted(tuple(sorted(e)) for e in sol.edges)
