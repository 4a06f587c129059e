import pytest

from gradmorph.dynforest import HAVE_COMPILED_CORE
from gradmorph.gen import random_graph, random_spanning_forest
from gradmorph.graph import (DataError, Graph, SpanningForest,
                             solution_stats, validate_forest)
from gradmorph.msf import (CrossEdgeHeap, TreeTransformState,
                           min_weight_cross_edge, plan_msf, plan_tree)
from gradmorph.oracles import msf_exact
from gradmorph.script import check_guarantee, replay


def _triangle(w1, w2, w3):
    g = Graph()
    e1 = g.add_edge(0, 1, w1)
    e2 = g.add_edge(1, 2, w2)
    e3 = g.add_edge(0, 2, w3)
    return g, e1, e2, e3


def test_heap_min_and_ties():
    g = Graph()
    ids = [g.add_edge(10 + i, 20 + i, w) for i, w in enumerate((4.0, 2.0, 7.0))]
    heap = CrossEdgeHeap(g, ids)
    assert min_weight_cross_edge(heap) == ids[1]
    g2 = Graph()
    a = g2.add_edge(0, 1, 2.0)
    b = g2.add_edge(2, 3, 2.0)
    heap = CrossEdgeHeap(g2, [b, a])
    assert min_weight_cross_edge(heap) == min(a, b)  # tie -> smaller id
    heap.discard(min(a, b))
    assert min_weight_cross_edge(heap) == max(a, b)
    heap.discard(max(a, b))
    with pytest.raises(DataError):
        heap.peek_min()


def test_local_trans_case1():
    g, e1, e2, e3 = _triangle(1.0, 3.0, 2.0)
    state = TreeTransformState.create(g, [e1, e2], [e1, e3], "naive")
    case, ops = state.local_trans(e3)
    assert case == 1
    assert state.work_src == {e1, e3} == state.work_tgt
    assert [op.kind for op in ops] == ["remove", "add"]


def test_local_trans_case2():
    g, e1, e2, e3 = _triangle(5.0, 1.0, 2.0)
    state = TreeTransformState.create(g, [e1, e2], [e1, e3], "naive")
    case, ops = state.local_trans(e3)
    assert case == 2
    assert state.work_tgt == {e1, e2} == state.work_src


def test_local_trans_rejects_non_cross_edges():
    g, e1, e2, e3 = _triangle(1.0, 3.0, 2.0)
    state = TreeTransformState.create(g, [e1, e2], [e1, e3], "naive")
    with pytest.raises(DataError):
        state.local_trans(e1)


def test_symmetric_difference_shrinks_by_two(rng):
    for _ in range(30):
        g = random_graph(rng, rng.randint(3, 24), 60, 1.0, 50.0, connected=True)
        t1 = random_spanning_forest(rng, g).edge_ids()
        t2 = random_spanning_forest(rng, g).edge_ids()
        state = TreeTransformState.create(g, t1, t2, "naive")
        while len(state.heap):
            before = len(state.work_src ^ state.work_tgt)
            case, _ = state.local_trans(min_weight_cross_edge(state.heap))
            after = len(state.work_src ^ state.work_tgt)
            assert after == before - 2
            # both work trees stay spanning trees
            assert validate_forest(g, state.work_src).ok
            assert validate_forest(g, state.work_tgt).ok


def test_plan_tree_examples():
    g, e1, e2, e3 = _triangle(1.0, 3.0, 2.0)
    assert plan_tree(g, [e1, e2], [e1, e2], "naive") == []
    phases = plan_tree(g, [e1, e2], [e1, e3], "naive")
    assert len(phases) == 1 and len(phases[0].ops) == 2


def test_plan_tree_case2_reverse_stitch():
    # force a case-2 step: cheapest cross edge loses to the tree edge
    g = Graph()
    e_ab = g.add_edge(0, 1, 1.0)
    e_bc = g.add_edge(1, 2, 2.0)
    e_ac = g.add_edge(0, 2, 5.0)
    src = [e_ab, e_bc]
    tgt = [e_ab, e_ac]
    phases = plan_tree(g, src, tgt, "naive")
    report = replay(g, src, _wrap(phases), "per-phase")
    assert report.final_edges == frozenset(tgt)
    ceiling = max(sum(g.weight(e) for e in src), sum(g.weight(e) for e in tgt))
    assert all(b.weight <= ceiling + 1e-9 for b in report.phase_ends())


def _wrap(phases):
    from gradmorph.script import TransformationScript
    return TransformationScript("msf", 2, None, phases)


def _master_check(g, src, tgt, index_kind="naive"):
    script = plan_msf(g, src, tgt, index_kind)
    assert all(len(p.ops) == 2 for p in script.phases)
    report = replay(g, src.edge_ids(), script, "per-phase")
    res = check_guarantee(report, solution_stats(g, src),
                          solution_stats(g, tgt), "msf")
    assert res.ok, (res.reason, res.boundary)
    assert report.final_edges == frozenset(tgt.edge_ids())
    return script, report


def test_plan_msf_identity_and_errors(rng):
    g = random_graph(rng, 10, 20, 1.0, 9.0, connected=True)
    f = SpanningForest(g, msf_exact(g))
    assert plan_msf(g, f, f, "naive").phases == []
    broken = SpanningForest(g, list(f.edges)[:-1])
    with pytest.raises(DataError):
        plan_msf(g, broken, f, "naive")


def test_plan_msf_disconnected_components_ordering(rng):
    # mixed-sign components: decreasing side must bank weight first
    g = Graph()
    # component A: weight rises 1 -> 6
    a1 = g.add_edge(0, 1, 1.0)
    a2 = g.add_edge(1, 2, 6.0)
    g.add_edge(0, 2, 6.0)
    # component B: weight falls 10 -> 8
    b1 = g.add_edge(10, 11, 10.0)
    b2 = g.add_edge(11, 12, 8.0)
    g.add_edge(10, 12, 8.0)
    src = SpanningForest(g, [a1, g.edge_id(0, 2), b1, g.edge_id(10, 12)])
    tgt = SpanningForest(g, [a1, a2, b1, b2])
    _master_check(g, src, tgt)
    _master_check(g, tgt, src)


def test_plan_msf_random_sweep(rng):
    kinds = ["naive", "linkcut-pure"]
    if HAVE_COMPILED_CORE:
        kinds.append("linkcut-compiled")
    scripts = []
    for trial in range(40):
        n = rng.randint(2, 40)
        connected = trial % 2 == 0
        g = random_graph(rng, n, int(1.5 * n), 1.0, 60.0, connected=connected)
        src = SpanningForest(g, msf_exact(g))
        tgt = random_spanning_forest(rng, g)
        per_kind = [_master_check(g, src, tgt, k)[0] for k in kinds]
        # identical scripts regardless of index implementation
        assert all(s == per_kind[0] for s in per_kind[1:])
        _master_check(g, tgt, src, "naive")


def test_kruskal_source_weight_ceiling(rng):
    # source = MST, target = random forest: trace never exceeds w(target)
    for _ in range(20):
        g = random_graph(rng, 30, 70, 1.0, 99.0, connected=True)
        src = SpanningForest(g, msf_exact(g))
        tgt = random_spanning_forest(rng, g)
        _, report = _master_check(g, src, tgt)
        w_tgt = sum(g.weight(e) for e in tgt.edges)
        assert all(b.weight <= w_tgt + 1e-9 for b in report.phase_ends())
