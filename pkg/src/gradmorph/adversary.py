"""Lower-bound harness: update streams forcing high recourse on accurate
matching maintainers.

Paths grown two edges at a time force an accurate maintainer to flip its
whole matching every growth step. The incremental variant builds many
vertex-disjoint copies adaptively, halting a copy as soon as the subject's
matching restricted to it stops being the unique maximum and resuming it
if the subject ever repairs it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

from .graph import ContractError, DataError, DeltaReport, Graph, UpdateEvent
from .wrapper import InnerAlgorithm, OutputDelta

PATH_SCALE = 0.25     # l = max(1, floor(PATH_SCALE / eps))
COPY_SCALE = 0.5      # copies = max(1, floor(COPY_SCALE * eps * n))


def path_length_param(eps: float) -> int:
    if eps <= 0:
        raise DataError(f"epsilon {eps} must be positive")
    return max(1, math.floor(PATH_SCALE / eps))


def gen_fully_dynamic(eps: float, rounds: int, n: int) -> list[UpdateEvent]:
    """Non-adaptive stream: per round, grow one path from empty to length
    4l - 1 (extending both ends two edges at a time past length 2l - 1),
    then tear it down."""
    l = path_length_param(eps)
    span = 4 * l  # vertices of the final path
    if span > n:
        raise DataError(f"need {span} vertices for eps={eps}, have n={n}")
    events: list[UpdateEvent] = []
    # vertex positions 0..span-1; initial segment sits in the middle
    lo, hi = l, 3 * l - 1
    for _ in range(rounds):
        present: list[tuple[int, int]] = []

        def ins(a: int, b: int) -> None:
            events.append(UpdateEvent.edge_insert(a, b, 1.0))
            present.append((a, b))

        for x in range(lo, hi):
            ins(x, x + 1)
        left, right = lo, hi
        while left > 0:
            ins(left - 1, left)
            ins(right, right + 1)
            left -= 1
            right += 1
        for a, b in present:
            events.append(UpdateEvent.edge_delete(a, b))
    return events


def canonical_path_matching(path_edges: list[int]) -> set[int]:
    """Edges at odd positions along the path (first, third, ...): the
    maximum matching, unique when the path length is odd."""
    return set(path_edges[0::2])


class ExactPathMaintainer(InnerAlgorithm):
    """Maintains the canonical maximum matching on disjoint-path graphs.

    The harness's streams only ever form vertex-disjoint paths; anything
    else is a contract error.
    """

    beta = 1.0

    def __init__(self, g: Graph) -> None:
        self.g = g
        self._matching: set[int] = set()

    def matching_ids(self) -> list[int]:
        return sorted(self._matching)

    def current_weight(self) -> float:
        return sum(self.g.weight(e) for e in self._matching)

    def handle_update(self, ev: UpdateEvent, delta: DeltaReport) -> OutputDelta:
        out = OutputDelta()
        touched: set[int] = set()
        for eid, u, v, _ in delta.removed:
            if eid in self._matching:
                self._matching.discard(eid)
                out.removed.append(eid)
            touched.update((u, v))
        for eid, u, v, _ in delta.added:
            touched.update((u, v))
        done: set[int] = set()
        for x in sorted(touched):
            if x in done or not self.g.has_vertex(x) or not self.g.incident(x):
                continue
            # find an end of x's path, then recompute its canonical matching
            path = self._path_from_any(x)
            for e, a, b in [(e, *self.g.endpoints(e)) for e in path]:
                done.update((a, b))
            want = canonical_path_matching(path)
            have = {e for e in path if e in self._matching}
            for e in sorted(have - want):
                self._matching.discard(e)
                out.removed.append(e)
            for e in sorted(want - have):
                self._matching.add(e)
                out.added.append(e)
        return out

    def _path_from_any(self, v: int) -> list[int]:
        """Ordered edge list of v's path, starting at its smaller-id end."""
        g = self.g
        # walk to one end
        x = v
        prev = None
        while True:
            step = [e for e in g.incident(x) if e != prev]
            if len(step) + (1 if prev is not None else 0) > 2:
                raise ContractError("adversary graph is not a disjoint union of paths")
            if not step:
                break
            prev = step[0]
            a, b, _ = g.edge(prev)
            x = b if a == x else a
        # x is an end; walk the full path
        ordered = []
        prev = None
        while True:
            step = [e for e in g.incident(x) if e != prev]
            if not step:
                break
            e = step[0]
            ordered.append(e)
            a, b, _ = g.edge(e)
            x = b if a == x else a
            prev = e
        return ordered


class StaticSubject(InnerAlgorithm):
    """Zero-recourse straw man: never changes its (empty) matching."""

    beta = float("inf")

    def __init__(self, g: Graph) -> None:
        self.g = g

    def matching_ids(self) -> list[int]:
        return []

    def current_weight(self) -> float:
        return 0.0

    def handle_update(self, ev: UpdateEvent, delta: DeltaReport) -> OutputDelta:
        return OutputDelta()


@dataclass
class CopyState:
    index: int
    base: int                 # first vertex id of the copy's block
    length: int = 0           # current number of edges
    edges: list[int] = field(default_factory=list)   # eids, left to right
    lo: int = 0
    hi: int = 0
    status: str = "empty"     # empty | growing | suspended | halted | complete
    halt_witness: Optional[tuple[int, int]] = None   # (restricted size, canonical size)


@dataclass
class AdversaryRun:
    eps: float
    mode: str
    l: int
    copies: list[CopyState]
    total_updates: int = 0
    total_recourse: int = 0
    resumed: int = 0

    def amortized_recourse(self) -> float:
        return self.total_recourse / self.total_updates if self.total_updates else 0.0

    def complete_fraction(self) -> float:
        done = sum(1 for c in self.copies if c.status == "complete")
        return done / len(self.copies) if self.copies else 0.0


class IncrementalAdversary:
    """Adaptive insertion-only adversary for (1+eps)-accurate maintainers."""

    def __init__(self, g: Graph, subject: InnerAlgorithm, eps: float, n: int) -> None:
        self.g = g
        self.subject = subject
        self.eps = eps
        self.l = path_length_param(eps)
        copies = max(1, math.floor(COPY_SCALE * eps * n))
        span = 4 * self.l
        if copies * span > n:
            raise DataError(f"need {copies * span} vertices "
                            f"(copies={copies}, span={span}), have n={n}")
        self.run = AdversaryRun(eps, "incremental", self.l, [
            CopyState(i, base=i * span) for i in range(copies)
        ])
        self._matched: set[int] = set()
        self._stack: list[int] = []        # suspended copy indexes
        self._events: list[UpdateEvent] = []

    # -- copy geometry ------------------------------------------------

    def _grow(self, copy: CopyState, side: str) -> UpdateEvent:
        l = self.l
        if copy.status == "empty":
            copy.lo = copy.base + l
            copy.hi = copy.lo
            copy.status = "growing"
        if side == "left":
            a = copy.lo - 1
            ev = UpdateEvent.edge_insert(a, copy.lo, 1.0)
            copy.lo = a
        else:
            b = copy.hi + 1
            ev = UpdateEvent.edge_insert(copy.hi, b, 1.0)
            copy.hi = b
        return ev

    def _apply(self, ev: UpdateEvent, copy: CopyState, at_left: bool) -> None:
        delta = self.g.apply_update(ev)
        eid = delta.added[0][0]
        if at_left:
            copy.edges.insert(0, eid)
        else:
            copy.edges.append(eid)
        copy.length += 1
        out = self.subject.handle_update(ev, delta)
        self.run.total_updates += 1
        self.run.total_recourse += out.recourse()
        for e in out.added:
            self._matched.add(e)
        for e in out.removed:
            self._matched.discard(e)
        self._events.append(ev)

    def _restricted_ok(self, copy: CopyState) -> bool:
        """Is the subject's matching restricted to the copy the unique
        maximum? Only checked at odd lengths, where the closed form holds."""
        want = canonical_path_matching(copy.edges)
        have = {e for e in copy.edges if e in self._matched}
        if have == want:
            return True
        copy.halt_witness = (len(have), len(want))
        return False

    # -- protocol -------------------------------------------------------

    def _advance(self, copy: CopyState) -> bool:
        """Grow the copy by one conceptual step; True when complete."""
        l = self.l
        if copy.length < 2 * l - 1:
            side = "right"
            self._apply(self._grow(copy, side), copy, at_left=False)
            if copy.length == 2 * l - 1 and not self._restricted_ok(copy):
                copy.status = "halted"
            return False
        ev = self._grow(copy, "left")
        self._apply(ev, copy, at_left=True)
        ev = self._grow(copy, "right")
        self._apply(ev, copy, at_left=False)
        if copy.length >= 4 * l - 1:
            copy.status = "complete"
            return True
        if not self._restricted_ok(copy):
            copy.status = "halted"
        return False

    def _find_resumable(self) -> Optional[CopyState]:
        for copy in self.run.copies:
            if copy.status == "halted" and copy.length >= 2 * self.l - 1 \
                    and self._restricted_ok(copy):
                copy.halt_witness = None
                return copy
        return None

    def run_to_completion(self, max_updates: int = 10_000_000) -> AdversaryRun:
        current: Optional[CopyState] = None
        while self.run.total_updates < max_updates:
            resumable = self._find_resumable()
            if resumable is not None and resumable is not current:
                if current is not None and current.status == "growing":
                    current.status = "suspended"
                    self._stack.append(current.index)
                    self.run.resumed += 1
                current = resumable
                current.status = "growing"
            if current is None or current.status != "growing":
                current = None
                while self._stack:
                    cand = self.run.copies[self._stack.pop()]
                    if cand.status == "suspended":
                        cand.status = "growing"
                        current = cand
                        break
                if current is None:
                    nxt = next((c for c in self.run.copies if c.status == "empty"), None)
                    if nxt is None:
                        break
                    current = nxt
            if self._advance(current):
                current = None
        for copy in self.run.copies:
            if copy.status in ("growing", "suspended"):
                copy.status = "halted" if copy.halt_witness else copy.status
        return self.run

    def events(self) -> list[UpdateEvent]:
        return list(self._events)


def run_incremental_adversary(subject_factory, eps: float, n: int,
                              ) -> tuple[AdversaryRun, list[UpdateEvent]]:
    """Drive the adaptive incremental adversary against a fresh subject."""
    g = Graph()
    subject = subject_factory(g)
    adv = IncrementalAdversary(g, subject, eps, n)
    run = adv.run_to_completion()
    return run, adv.events()


def run_decremental_mirror(subject_factory, eps: float, n: int,
                           ) -> AdversaryRun:
    """Replay the incremental stream in reverse as deletions.

    The graph is seeded silently (setup is not measured), then each edge is
    deleted in reverse insertion order while recourse is counted.
    """
    base_run, events = run_incremental_adversary(
        lambda g: ExactPathMaintainer(g), eps, n)
    g = Graph()
    subject = subject_factory(g)
    for ev in events:
        delta = g.apply_update(ev)
        subject.handle_update(ev, delta)
    run = AdversaryRun(eps, "decremental", base_run.l, [])
    for ev in reversed(events):
        down = UpdateEvent.edge_delete(ev.u, ev.v)
        delta = g.apply_update(down)
        out = subject.handle_update(down, delta)
        run.total_updates += 1
        run.total_recourse += out.recourse()
    return run
