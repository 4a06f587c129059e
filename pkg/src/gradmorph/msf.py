"""Spanning forest transformation planner.

Two work trees per connected component, transformed toward each other by a
greedy exchange procedure: repeatedly take the lightest edge in one tree
but not the other and swap it against an edge of the cycle it closes. The
forward stream moves the source-side tree, the backward stream moves the
target-side tree; the emitted fragment is the forward stream followed by
the backward stream reversed with inverted ops. Every phase is one 2-op
exchange and phase-end weight never exceeds max(w(F), w(F')).
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from typing import Iterable

from .graph import (DEFAULT_TOLERANCE, ContractError, DataError, Graph,
                    SpanningForest, validate_forest)
from .dynforest import ForestIndex, make_index
from .script import ChangeOp, Phase, TransformationScript

MSF_PHASE_BUDGET = 2


class CrossEdgeHeap:
    """Min-heap over the target-side-only edge set, keyed (weight, id),
    with lazy deletion."""

    def __init__(self, g: Graph, eids: Iterable[int]) -> None:
        self._g = g
        self._alive: set[int] = set(eids)
        self._heap = [(g.weight(e), e) for e in self._alive]
        heapq.heapify(self._heap)

    def __len__(self) -> int:
        return len(self._alive)

    def discard(self, eid: int) -> None:
        self._alive.discard(eid)

    def add(self, eid: int) -> None:
        if eid not in self._alive:
            self._alive.add(eid)
            heapq.heappush(self._heap, (self._g.weight(eid), eid))

    def peek_min(self) -> int:
        while self._heap and self._heap[0][1] not in self._alive:
            heapq.heappop(self._heap)
        if not self._heap:
            raise DataError("empty cross-edge heap")
        return self._heap[0][1]


def min_weight_cross_edge(heap: CrossEdgeHeap) -> int:
    """Minimum true-weight edge of the cross set; ties break by edge id."""
    return heap.peek_min()


@dataclass
class TreeTransformState:
    """Work trees of one component plus their indexes and op streams."""

    g: Graph
    work_src: set[int]
    work_tgt: set[int]
    index_src: ForestIndex
    index_tgt: ForestIndex
    heap: CrossEdgeHeap
    forward: list[Phase] = field(default_factory=list)
    backward: list[Phase] = field(default_factory=list)

    @staticmethod
    def create(g: Graph, tree_src: Iterable[int], tree_tgt: Iterable[int],
               index_kind: str = "linkcut") -> "TreeTransformState":
        src, tgt = set(tree_src), set(tree_tgt)
        index_src = make_index(index_kind)
        index_tgt = make_index(index_kind)
        for eid in sorted(src):
            u, v, _ = g.edge(eid)
            index_src.link(eid, u, v, 1 if eid in tgt else 2)
        for eid in sorted(tgt):
            u, v, _ = g.edge(eid)
            index_tgt.link(eid, u, v, 1 if eid in src else 2)
        heap = CrossEdgeHeap(g, tgt - src)
        return TreeTransformState(g, src, tgt, index_src, index_tgt, heap)

    def local_trans(self, e_prime: int) -> tuple[int, tuple[ChangeOp, ChangeOp]]:
        """One exchange step for cross edge e_prime; returns (case, ops).

        Case 1 swaps inside the source-side tree (never increasing its
        weight); case 2 swaps inside the target-side tree (strictly
        decreasing its weight). Either way the symmetric difference of the
        work trees shrinks by exactly two edges.
        """
        g = self.g
        if e_prime not in self.work_tgt or e_prime in self.work_src:
            raise DataError(f"edge {e_prime} is not in the cross set")
        pu, pv, pw = g.edge(e_prime)
        e = self.index_src.path_edge_outside(pu, pv)
        ew = g.weight(e)
        if ew >= pw:
            # case 1: source tree drops e, gains e_prime
            self.work_src.remove(e)
            self.work_src.add(e_prime)
            self.index_src.cut(e)
            self.index_src.link(e_prime, pu, pv, 1)
            self.index_tgt.set_dummy(e_prime, 1)
            self.heap.discard(e_prime)
            eu, ev, _ = g.edge(e)
            ops = (ChangeOp("remove", eu, ev, ew), ChangeOp("add", pu, pv, pw))
            self.forward.append(Phase(list(ops)))
            return 1, ops
        # case 2: target tree drops e'' (on its cycle with e), gains e
        eu, ev, _ = g.edge(e)
        e2 = self.index_tgt.path_edge_outside(eu, ev)
        e2w = g.weight(e2)
        if not e2w > ew:
            raise ContractError(
                f"exchange would not decrease target-side weight: "
                f"w({e2}) = {e2w} <= w({e}) = {ew}")
        self.work_tgt.remove(e2)
        self.work_tgt.add(e)
        self.index_tgt.cut(e2)
        self.index_tgt.link(e, eu, ev, 1)
        self.index_src.set_dummy(e, 1)
        self.heap.discard(e2)
        e2u, e2v, _ = g.edge(e2)
        ops = (ChangeOp("remove", e2u, e2v, e2w), ChangeOp("add", eu, ev, ew))
        self.backward.append(Phase(list(ops)))
        return 2, ops


def plan_tree(g: Graph, tree_src: Iterable[int], tree_tgt: Iterable[int],
              index_kind: str = "linkcut") -> list[Phase]:
    """Complete fragment transforming one spanning tree into another.

    Forward stream first, then the backward stream reversed with each
    2-op exchange inverted ([remove x, add y] -> [remove y, add x]).
    """
    state = TreeTransformState.create(g, tree_src, tree_tgt, index_kind)
    steps = 0
    expected_steps = len(state.work_src ^ state.work_tgt) // 2
    while len(state.heap):
        e_prime = min_weight_cross_edge(state.heap)
        state.local_trans(e_prime)
        steps += 1
        if steps > expected_steps:
            raise ContractError("exchange count exceeds |src xor tgt| / 2")
    if state.work_src != state.work_tgt:
        raise ContractError("work trees differ after an empty cross set")
    phases = list(state.forward)
    for ph in reversed(state.backward):
        rm, add = ph.ops
        phases.append(Phase([add.inverted(), rm.inverted()]))
    return phases


def plan_msf(g: Graph, source: SpanningForest, target: SpanningForest,
             index_kind: str = "linkcut",
             tolerance: float = DEFAULT_TOLERANCE) -> TransformationScript:
    """Plan 2-op phases transforming forest source into forest target.

    Components whose tree weight decreases (or is unchanged) are handled
    before components whose weight increases, which keeps the global
    replayed weight within max(w(F), w(F')) at every phase end. Runs in
    O((|F| + |F'|) log(|F| + |F'|)) with the link-cut index.
    """
    for name, f in (("source", source), ("target", target)):
        report = validate_forest(g, f)
        if not report:
            raise DataError(f"{name} forest invalid: {report.reason} "
                            f"(edge={report.edge}, vertex={report.vertex})")
    labels = g.components()
    src_by_comp: dict[int, list[int]] = {}
    tgt_by_comp: dict[int, list[int]] = {}
    for eid in source.edges:
        u, _, _ = g.edge(eid)
        src_by_comp.setdefault(labels[u], []).append(eid)
    for eid in target.edges:
        u, _, _ = g.edge(eid)
        tgt_by_comp.setdefault(labels[u], []).append(eid)

    comps = sorted(set(src_by_comp) | set(tgt_by_comp))
    entries = []
    for c in comps:
        src_ids = src_by_comp.get(c, [])
        tgt_ids = tgt_by_comp.get(c, [])
        colored = sum(g.weight(e) for e in tgt_ids) - sum(g.weight(e) for e in src_ids)
        entries.append((c, src_ids, tgt_ids, colored))
    # weight-decreasing components first: the banked decrease keeps the
    # running total under max(w(F), w(F')) while later components climb
    entries.sort(key=lambda t: 1 if t[3] > tolerance else 0)

    phases: list[Phase] = []
    for _, src_ids, tgt_ids, _ in entries:
        if set(src_ids) == set(tgt_ids):
            continue
        phases.extend(plan_tree(g, src_ids, tgt_ids, index_kind))
    script = TransformationScript("msf", MSF_PHASE_BUDGET, None, phases)
    script.validate()
    return script
