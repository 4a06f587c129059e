import pytest

from gradmorph.graph import DataError, Graph, Matching, solution_stats
from gradmorph.script import (ChangeOp, Phase, TransformationScript,
                              check_guarantee, replay, report_to_csv_rows)

from conftest import path_graph


def _script(problem, budget, phase_ops, eps=None):
    return TransformationScript(
        problem, budget, eps,
        [Phase([ChangeOp(*op) for op in ops]) for ops in phase_ops])


def test_empty_script_single_snapshot():
    g = path_graph(3)
    src = Matching(g, [g.edge_id(0, 1)])
    report = replay(g, src.edge_ids(), _script("mcm", 3, []))
    assert len(report.boundaries) == 1
    assert report.final_edges == frozenset(src.edge_ids())


def test_single_add_on_isolated_edge():
    g = Graph()
    g.add_edge(0, 1, 2.0)
    report = replay(g, [], _script("mcm", 3, [[("add", 0, 1, 2.0)]]))
    assert report.boundaries[-1].size == 1
    assert report.boundaries[-1].valid


def test_replay_structural_errors_name_location():
    g = path_graph(3)
    with pytest.raises(DataError, match="phase 0 op 0"):
        replay(g, [], _script("mcm", 3, [[("remove", 0, 1, 1.0)]]))
    with pytest.raises(DataError, match="phase 0 op 1"):
        replay(g, [], _script("mcm", 3, [[("add", 0, 1, 1.0), ("add", 0, 1, 1.0)]]))
    with pytest.raises(DataError, match="not in graph"):
        replay(g, [], _script("mcm", 3, [[("add", 0, 9, 1.0)]]))
    with pytest.raises(DataError, match="recorded weight"):
        replay(g, [], _script("mcm", 3, [[("add", 0, 1, 5.0)]]))


def test_conflicting_add_is_recorded_not_raised():
    g = path_graph(3)
    src = Matching(g, [g.edge_id(0, 1)])
    script = _script("mcm", 3, [[("add", 1, 2, 1.0)]])
    report = replay(g, src.edge_ids(), script)
    assert not report.boundaries[-1].valid
    stats = solution_stats(g, src)
    result = check_guarantee(report, stats, stats, "mcm")
    assert not result.ok and "invalid" in result.reason


def test_phase_budget_enforced():
    g = path_graph(5)
    script = _script("mcm", 1, [[("add", 0, 1, 1.0), ("add", 2, 3, 1.0)]])
    from gradmorph.graph import ContractError
    with pytest.raises(ContractError, match="budget"):
        replay(g, [], script)


def test_check_guarantee_mcm_arithmetic():
    g = path_graph(6)
    src = Matching(g, [g.edge_id(0, 1), g.edge_id(2, 3)])
    report = replay(g, src.edge_ids(), _script("mcm", 3, [
        [("remove", 2, 3, 1.0)],
        [("add", 4, 5, 1.0)],
    ]))
    # sizes 2,1,2 with |M|=2, |M'|=2: floor = min(2, 1) = 1 -> pass
    stats2 = solution_stats(g, src)
    assert check_guarantee(report, stats2, stats2, "mcm").ok
    # target size 3 -> floor 2, the dip to 1 fails
    tgt3 = solution_stats(g, Matching(g, [g.edge_id(0, 1), g.edge_id(2, 3),
                                          g.edge_id(4, 5)]))
    res = check_guarantee(report, stats2, tgt3, "mcm")
    assert not res.ok and res.boundary.size == 1


def test_check_guarantee_mwm_floor_arithmetic():
    # w(M)=100, W=5, eps=0.1: floor = max(95, 90) = 95; a 94 phase end fails
    g = Graph()
    edges = [g.add_edge(2 * i, 2 * i + 1, 5.0) for i in range(20)]
    src = Matching(g, edges)
    u0, v0 = g.endpoints(edges[0])
    u1, v1 = g.endpoints(edges[1])
    extra = g.add_edge(100, 101, 4.0)
    script = _script("mwm", 10, [
        [("remove", u0, v0, 5.0), ("remove", u1, v1, 5.0),
         ("add", 100, 101, 4.0)],
    ], eps=0.1)
    assert extra in g.edge_ids()
    report = replay(g, src.edge_ids(), script, "per-phase")
    stats_src = solution_stats(g, src)
    res = check_guarantee(report, stats_src, stats_src, "mwm", 0.1)
    assert not res.ok and res.boundary.weight == pytest.approx(94.0)
    # per-op granularity catches the op-end dip to 90 < w - W = 95 first
    report_op = replay(g, src.edge_ids(), script, "per-op")
    res = check_guarantee(report_op, stats_src, stats_src, "mwm", 0.1)
    assert not res.ok and res.boundary.weight == pytest.approx(90.0)
    # a 96 phase end passes the 95 floor
    ok_script = _script("mwm", 10, [
        [("remove", u0, v0, 5.0), ("add", 100, 101, 4.0)],
    ], eps=0.1)
    report = replay(g, src.edge_ids(), ok_script, "per-phase")
    assert check_guarantee(report, stats_src, stats_src, "mwm", 0.1).ok


def test_check_guarantee_problem_mismatch():
    g = path_graph(3)
    report = replay(g, [], _script("mcm", 3, []))
    stats = solution_stats(g, Matching(g))
    with pytest.raises(DataError):
        check_guarantee(report, stats, stats, "msf")


def test_check_guarantee_msf():
    g = Graph()
    e1 = g.add_edge(0, 1, 1.0)
    e2 = g.add_edge(1, 2, 5.0)
    e3 = g.add_edge(0, 2, 2.0)
    from gradmorph.graph import SpanningForest
    src = SpanningForest(g, [e1, e2])
    tgt = SpanningForest(g, [e1, e3])
    script = _script("msf", 2, [[("remove", 1, 2, 5.0), ("add", 0, 2, 2.0)]])
    report = replay(g, src.edge_ids(), script)
    res = check_guarantee(report, solution_stats(g, src),
                          solution_stats(g, tgt), "msf")
    assert res.ok
    bad = _script("msf", 3, [[("remove", 1, 2, 5.0), ("add", 0, 2, 2.0),
                              ("remove", 0, 2, 2.0)]])
    report = replay(g, src.edge_ids(), bad)
    res = check_guarantee(report, solution_stats(g, src),
                          solution_stats(g, tgt), "msf")
    assert not res.ok  # 3-op phase and non-spanning end


def test_json_round_trip():
    script = _script("mwm", 9, [
        [("add", 1, 2, 1.5), ("remove", 2, 3, 2.0)],
        [("add", 4, 5, 1.0)],
    ], eps=0.25)
    again = TransformationScript.from_json(script.to_json())
    assert again == script
    with pytest.raises(DataError):
        TransformationScript.from_json("{nope")
    with pytest.raises(DataError):
        TransformationScript.from_json("{\"problem\": \"mcm\"}")


def test_reversed_script_round_trip():
    g = path_graph(4)
    src = Matching(g, [g.edge_id(1, 2)])
    script = _script("mcm", 3, [
        [("add", 0, 1, 1.0)] if False else [("remove", 1, 2, 1.0)],
        [("add", 0, 1, 1.0)],
        [("add", 2, 3, 1.0)],
    ])
    fwd = replay(g, src.edge_ids(), script)
    back = replay(g, fwd.final_edges, script.reversed_script())
    assert back.final_edges == frozenset(src.edge_ids())


def test_replay_deterministic_and_csv_shape():
    g = path_graph(4)
    script = _script("mcm", 3, [[("add", 0, 1, 1.0)], [("add", 2, 3, 1.0)]])
    r1 = replay(g, [], script, "per-op")
    r2 = replay(g, [], script, "per-op")
    assert r1 == r2
    rows = report_to_csv_rows(r1)
    assert rows[0][0] == "boundary_index"
    assert len(rows) == len(r1.boundaries) + 1
