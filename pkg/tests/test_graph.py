import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gradmorph.graph import (DataError, Graph, Matching, SpanningForest,
                             UnionFind, UpdateEvent, solution_stats,
                             validate_forest, validate_matching)

from conftest import path_graph


def test_add_edge_rejects_self_loops_and_duplicates():
    g = Graph()
    with pytest.raises(DataError):
        g.add_edge(1, 1)
    g.add_edge(1, 2)
    with pytest.raises(DataError):
        g.add_edge(2, 1)
    with pytest.raises(DataError):
        g.add_edge(1, 3, 0.0)
    with pytest.raises(DataError):
        g.add_edge(1, 3, -2.0)


def test_edge_ids_are_stable_and_fresh_after_reinsert():
    g = Graph()
    first = g.add_edge(1, 2)
    g.remove_edge(1, 2)
    second = g.add_edge(1, 2)
    assert second != first


def test_apply_update_edge_cases():
    g = Graph()
    g.ensure_vertex(1)
    g.ensure_vertex(2)
    delta = g.apply_update(UpdateEvent.edge_insert(1, 2, 3.0))
    assert [(d[1], d[2], d[3]) for d in delta.added] == [(1, 2, 3.0)]
    with pytest.raises(DataError):
        g.apply_update(UpdateEvent.edge_insert(2, 1, 1.0))
    g.apply_update(UpdateEvent.edge_delete(1, 2))
    with pytest.raises(DataError):
        g.apply_update(UpdateEvent.edge_delete(1, 2))


def test_vertex_delete_lists_incident_edges():
    g = Graph()
    for u in (2, 3, 4):
        g.add_edge(1, u)
    delta = g.apply_update(UpdateEvent.vertex_delete(1))
    assert len(delta.removed) == 3
    assert not g.has_vertex(1)
    with pytest.raises(DataError):
        g.apply_update(UpdateEvent.vertex_delete(1))


def test_vertex_insert_with_per_edge_weights():
    g = Graph()
    g.ensure_vertex(0)
    g.ensure_vertex(1)
    delta = g.apply_update(UpdateEvent.vertex_insert(9, [(0, 2.5), (1, 7.0)]))
    assert sorted(d[3] for d in delta.added) == [2.5, 7.0]
    with pytest.raises(DataError):
        g.apply_update(UpdateEvent.vertex_insert(9))


def test_aspect_ratio():
    g = Graph()
    with pytest.raises(DataError):
        g.aspect_ratio()
    g.add_edge(0, 1, 2.0)
    g.add_edge(1, 2, 3.0)
    g.add_edge(2, 3, 8.0)
    assert g.aspect_ratio() == pytest.approx(4.0)
    g2 = Graph()
    g2.add_edge(0, 1, 5.0)
    g2.add_edge(1, 2, 5.0)
    assert g2.aspect_ratio() == 1.0


def test_validate_matching_examples():
    g = path_graph(3)
    assert validate_matching(g, Matching(g)).ok
    bad = [g.edge_id(0, 1), g.edge_id(1, 2)]
    report = validate_matching(g, bad)
    assert not report.ok and report.vertex == 1
    g.remove_edge(1, 2)
    report = validate_matching(g, bad)
    assert not report.ok and report.reason == "missing edge"


def _naive_pairwise_check(g, eids):
    eids = list(eids)
    for e in eids:
        if not g.has_edge_id(e):
            return False
    for i in range(len(eids)):
        for j in range(i + 1, len(eids)):
            a = set(g.endpoints(eids[i]))
            b = set(g.endpoints(eids[j]))
            if a & b:
                return False
    return True


@settings(max_examples=150, deadline=None)
@given(st.data())
def test_validate_matching_agrees_with_naive_pairwise(data):
    n = data.draw(st.integers(2, 10))
    g = Graph()
    for v in range(n):
        g.ensure_vertex(v)
    pairs = data.draw(st.sets(
        st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)).filter(
            lambda t: t[0] < t[1]), max_size=12))
    eids = [g.add_edge(u, v) for u, v in pairs]
    subset = data.draw(st.sets(st.sampled_from(eids), max_size=8)) if eids else set()
    assert validate_matching(g, subset).ok == _naive_pairwise_check(g, subset)


@settings(max_examples=100, deadline=None)
@given(st.lists(st.tuples(st.integers(0, 8), st.integers(0, 8), st.booleans()),
                max_size=40))
def test_update_sequences_keep_graph_invariants(moves):
    g = Graph()
    for v in range(9):
        g.ensure_vertex(v)
    for u, v, insert in moves:
        if u == v:
            continue
        if insert and not g.has_edge(u, v):
            g.apply_update(UpdateEvent.edge_insert(u, v, 1.0))
        elif not insert and g.has_edge(u, v):
            g.apply_update(UpdateEvent.edge_delete(u, v))
        g.audit()


def test_forest_spanning_agrees_with_union_find():
    g = Graph()
    e1 = g.add_edge(0, 1, 1.0)
    e2 = g.add_edge(1, 2, 1.0)
    g.add_edge(0, 2, 1.0)
    g.ensure_vertex(5)
    assert validate_forest(g, [e1, e2]).ok
    assert validate_forest(g, [e1]).reason == "does not span"
    cyc = [e1, e2, g.edge_id(0, 2)]
    assert validate_forest(g, cyc).reason == "cycle"
    uf = UnionFind(g.vertices)
    for e in (e1, e2):
        uf.union(*g.endpoints(e))
    assert uf.labels() == g.components()


def test_solution_stats():
    g = Graph()
    e1 = g.add_edge(0, 1, 5.0)
    e2 = g.add_edge(2, 3, 1.0)
    empty = solution_stats(g, Matching(g))
    assert (empty.size, empty.total_weight, empty.max_edge_weight) == (0, 0, 0)
    s = solution_stats(g, Matching(g, [e1, e2]))
    assert (s.size, s.total_weight, s.max_edge_weight) == (2, 6.0, 5.0)
    g.add_edge(0, 2, 1.0)
    with pytest.raises(DataError):
        solution_stats(g, SpanningForest(g, [e1]))


def test_kcycle_stats_fixture():
    # k disjoint heavy edges: size k, weight k*A, max A
    k, a = 4, 10.0
    g = Graph()
    edges = [g.add_edge(2 * i, 2 * i + 1, a) for i in range(k)]
    s = solution_stats(g, Matching(g, edges))
    assert (s.size, s.total_weight, s.max_edge_weight) == (k, k * a, a)
