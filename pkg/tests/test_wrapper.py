import math

import pytest

from gradmorph.gen import random_update_stream
from gradmorph.graph import (ContractError, DataError, Graph, Matching,
                             UpdateEvent, validate_matching)
from gradmorph.oracles import max_matching_exact, max_weight_matching_exact
from gradmorph.sim import make_inner, run_simulation
from gradmorph.wrapper import (BatchRecompute, GreedyMaximalMatching,
                               InnerAlgorithm, OutputDelta, WrappedMatching,
                               snapshot_truncated)


def _drive(g, algo, events, validate_every=1):
    deltas = []
    for i, ev in enumerate(events):
        delta = g.apply_update(ev)
        out = algo.handle_update(ev, delta)
        deltas.append(out)
        if i % validate_every == 0:
            assert validate_matching(g, algo.matching_ids()).ok
    return deltas


def test_greedy_on_incremental_star():
    g = Graph()
    inner = GreedyMaximalMatching(g)
    events = [UpdateEvent.edge_insert(0, i, 1.0) for i in range(1, 6)]
    _drive(g, inner, events)
    assert inner.current_size() == 1


def test_greedy_rematches_after_deletion(rng):
    g = Graph()
    inner = GreedyMaximalMatching(g)
    events = random_update_stream(rng, 30, 400, delete_prob=0.45)
    _drive(g, inner, events)
    # maximality: no graph edge has both endpoints free
    for eid, u, v, _ in g.edges():
        assert inner.matching.matched_edge(u) is not None or \
            inner.matching.matched_edge(v) is not None


def test_batch_recompute_swap_recourse_on_growing_path():
    g = Graph()
    inner = BatchRecompute(g, eps_in=0.5)
    big_swap = False
    for v in range(60):
        ev = UpdateEvent.edge_insert(v, v + 1, 1.0)
        delta = g.apply_update(ev)
        out = inner.handle_update(ev, delta)
        if out.recourse() >= max(2, inner.current_size()):
            big_swap = True
    assert big_swap


def test_batch_recompute_approximation(rng):
    for _ in range(25):
        g = Graph()
        n = rng.randint(4, 14)
        for v in range(n):
            g.ensure_vertex(v)
        inner = BatchRecompute(g, eps_in=0.5)
        events = random_update_stream(rng, n, 80, delete_prob=0.35)
        _drive(g, inner, events, validate_every=5)
        # force a recompute and compare at the recompute point
        inner._steps_until_recompute = 1
        filler = UpdateEvent.vertex_insert(10_000 + rng.randrange(1000))
        delta = g.apply_update(filler)
        inner.handle_update(filler, delta)
        opt = len(max_matching_exact(g))
        assert inner.current_size() * (1 + inner.eps_in / 4) >= opt - 1e-9


def test_snapshot_truncated():
    g = Graph()
    ids = [g.add_edge(2 * i, 2 * i + 1, 1.0) for i in range(10)]

    class Fixed(InnerAlgorithm):
        def matching_ids(self):
            return ids

        def current_weight(self):
            return float(len(ids))

        def handle_update(self, ev, delta):
            return OutputDelta()

    snap = snapshot_truncated(g, Fixed(), 30)
    assert len(snap) == 10
    snap = snapshot_truncated(g, Fixed(), 3)
    assert len(snap) == 3


def test_contract_violation_surfaced():
    g = Graph()
    a = g.add_edge(0, 1, 1.0)
    b = g.add_edge(1, 2, 1.0)

    class Broken(InnerAlgorithm):
        def matching_ids(self):
            return [a, b]  # shares vertex 1

        def current_weight(self):
            return 2.0

        def handle_update(self, ev, delta):
            return OutputDelta()

    with pytest.raises(ContractError, match="sub-matching"):
        snapshot_truncated(g, Broken(), 5)


def test_wrap_parameter_errors():
    g = Graph()
    inner = GreedyMaximalMatching(g)
    with pytest.raises(DataError):
        WrappedMatching(g, inner, eps=0.6)
    with pytest.raises(DataError):
        WrappedMatching(g, inner, eps=0.0)
    with pytest.raises(DataError):
        WrappedMatching(g, inner, eps=0.1, weighted=True, psi=0.5)
    w = WrappedMatching(g, inner, eps=0.1)
    assert w.declared_beta == pytest.approx(2.0 * (1 + 2 * 0.125) ** 2)


def test_deletion_tombstone_recourse():
    g = Graph()
    inner = GreedyMaximalMatching(g)
    wrapped = WrappedMatching(g, inner, eps=0.1)
    events = [UpdateEvent.edge_insert(0, 1, 1.0),
              UpdateEvent.edge_insert(2, 3, 1.0),
              UpdateEvent.edge_insert(4, 5, 1.0)]
    _drive(g, wrapped, events)
    assert wrapped.current_size() == 3
    # deleting a non-matched edge: recourse 0
    ev = UpdateEvent.edge_insert(1, 2, 1.0)
    delta = g.apply_update(ev)
    wrapped.handle_update(ev, delta)
    ev = UpdateEvent.edge_delete(1, 2)
    delta = g.apply_update(ev)
    out = wrapped.handle_update(ev, delta)
    assert out.recourse() == 0
    # deleting an output-matched edge: exactly the tombstone
    ev = UpdateEvent.edge_delete(0, 1)
    delta = g.apply_update(ev)
    out = wrapped.handle_update(ev, delta)
    assert out.removed and len(out.removed) == 1


def test_vertex_delete_bounded_change(rng):
    g = Graph()
    inner = GreedyMaximalMatching(g)
    wrapped = WrappedMatching(g, inner, eps=0.2)
    events = random_update_stream(rng, 40, 300, delete_prob=0.2)
    _drive(g, wrapped, events)
    budget = wrapped.sim_budget
    v = next(iter(sorted(g.vertices)))
    ev = UpdateEvent.vertex_delete(v)
    delta = g.apply_update(ev)
    out = wrapped.handle_update(ev, delta)
    removed_by_tombstone = sum(
        1 for eid, *_ in delta.removed if eid in out.removed)
    assert removed_by_tombstone <= 1
    assert out.recourse() <= budget + 1


@pytest.mark.parametrize("inner_name", ["greedy", "batch:2.0"])
def test_recourse_bound_sweep(rng, inner_name):
    for eps in (0.4, 0.1):
        g = Graph()
        for v in range(80):
            g.ensure_vertex(v)
        inner = make_inner(inner_name, g)
        wrapped = WrappedMatching(g, inner, eps=eps)
        events = random_update_stream(rng, 80, 4000, delete_prob=0.4,
                                      vertex_ops=True)
        result = run_simulation(g, wrapped, events)
        assert result.max_recourse <= 16 * math.ceil(1 / eps)
        assert validate_matching(g, wrapped.matching_ids()).ok


def test_small_instance_tracks_inner(rng):
    # in the instant-switch regime the output equals the inner matching
    g = Graph()
    for v in range(10):
        g.ensure_vertex(v)
    inner = GreedyMaximalMatching(g)
    wrapped = WrappedMatching(g, inner, eps=0.1)
    events = random_update_stream(rng, 10, 200, delete_prob=0.4)
    for ev in events:
        delta = g.apply_update(ev)
        wrapped.handle_update(ev, delta)
        assert sorted(wrapped.matching_ids()) == sorted(inner.matching_ids())


def test_stale_matching_approximation_property(rng):
    """Freeze a maximal matching, apply <= floor(eps' |M|) updates, and the
    survivor is still a (beta (1 + 2 eps'))-approximation."""
    trials = 0
    while trials < 120:
        n = rng.randint(6, 14)
        warmup = rng.randint(10, 60)
        eps_prime = rng.choice((0.5, 0.25))
        events = random_update_stream(rng, n, warmup + 2 * n, delete_prob=0.35)
        g = Graph()
        for ev in events[:warmup]:
            g.apply_update(ev)
        frozen = Matching(g)
        for eid in sorted(g.edge_ids()):
            u, v = g.endpoints(eid)
            if frozen.matched_edge(u) is None and frozen.matched_edge(v) is None:
                frozen.add(eid)
        if not frozen:
            continue
        trials += 1
        beta = 2.0  # maximal matching
        k = math.floor(eps_prime * len(frozen))
        for ev in events[warmup:warmup + k]:
            delta = g.apply_update(ev)
            for eid, u, v, _ in delta.removed:
                frozen.discard_dead(eid, (u, v))
        opt = len(max_matching_exact(g))
        assert len(frozen) * beta * (1 + 2 * eps_prime) >= opt


def test_weighted_mode_validity_and_recourse(rng):
    psi = 4.0
    g = Graph()
    for v in range(60):
        g.ensure_vertex(v)
    inner = GreedyMaximalMatching(g)
    wrapped = WrappedMatching(g, inner, eps=0.1, weighted=True, psi=psi)
    events = random_update_stream(rng, 60, 2500, delete_prob=0.4,
                                  w_lo=1.0, w_hi=psi)
    result = run_simulation(g, wrapped, events)
    assert result.max_recourse <= 16 * math.ceil(psi / 0.1)
    assert validate_matching(g, wrapped.matching_ids()).ok


def test_weighted_small_instance_weight_floor(rng):
    # weighted analogue of the completeness bound, checked vs exact oracle
    psi = 2.0
    eps = 0.1
    for _ in range(10):
        g = Graph()
        for v in range(10):
            g.ensure_vertex(v)
        inner = GreedyMaximalMatching(g)
        wrapped = WrappedMatching(g, inner, eps=eps, weighted=True, psi=psi)
        events = random_update_stream(rng, 10, 150, delete_prob=0.35,
                                      w_lo=1.0, w_hi=psi)
        for ev in events:
            delta = g.apply_update(ev)
            wrapped.handle_update(ev, delta)
            opt_ids = max_weight_matching_exact(g)
            opt_w = sum(g.weight(e) for e in opt_ids)
            floor = opt_w * (1 - eps) / (
                inner.beta * psi * (1 + 2 * wrapped.window_ratio) ** 2)
            assert wrapped.current_weight() >= floor - 1e-9
