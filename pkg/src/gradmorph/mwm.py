"""Weighted matching transformation planner.

The symmetric difference of source and target splits into vertex-disjoint
alternating components. Components are processed gain-first so the running
surplus never goes negative; within a component the credited prefix-minimum
decides between running it whole and splitting it into its suffix and
prefix. The op stream is grouped into phases of O(1/eps) changes, cut
whenever a light source edge (weight < eps * w(source)) leaves the
matching, which pins the phase-end weight above (1-eps) * w(source).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Optional

from .graph import (DEFAULT_TOLERANCE, ContractError, DataError, Graph,
                    Matching, validate_matching)
from .mcm import _LinkedList
from .script import ChangeOp, Phase, TransformationScript


def mwm_phase_budget(eps: float) -> int:
    return 3 * math.ceil(1.0 / eps) + 3


@dataclass
class AlternatingComponent:
    """Path or cycle of alternating source-only / target-only edges.

    pairs[i] = (blue eid or None, red eid or None); only the first blue and
    the last red slot may be absent, and only for paths.
    """

    kind: str                                  # "path" | "cycle"
    pairs: list[tuple[Optional[int], Optional[int]]]
    colored_weight: float

    def k(self) -> int:
        return len(self.pairs)


def decompose(g: Graph, source: Matching, target: Matching) -> list[AlternatingComponent]:
    """Split source XOR target into alternating components.

    Isolated shared edges are excluded; every symmetric-difference edge
    lands in exactly one component. Deterministic: components discovered
    in ascending order of their smallest blue/red edge id.
    """
    for name, m in (("source", source), ("target", target)):
        report = validate_matching(g, m)
        if not report:
            raise DataError(f"{name} matching invalid: {report.reason}")
    blue = {eid for eid in source.edges if eid not in target.edges}
    red = {eid for eid in target.edges if eid not in source.edges}
    blue_at: dict[int, int] = {}
    red_at: dict[int, int] = {}
    for eid in blue:
        u, v, _ = g.edge(eid)
        blue_at[u] = eid
        blue_at[v] = eid
    for eid in red:
        u, v, _ = g.edge(eid)
        red_at[u] = eid
        red_at[v] = eid

    def other(eid: int, x: int) -> int:
        u, v, _ = g.edge(eid)
        return v if x == u else u

    seen: set[int] = set()
    comps: list[AlternatingComponent] = []

    def walk(start_edge: int, start_vertex: int) -> list[int]:
        """Edge sequence from start_vertex through start_edge onward."""
        out = [start_edge]
        seen.add(start_edge)
        x = other(start_edge, start_vertex)
        current = start_edge
        while True:
            nxt = red_at.get(x) if current in blue else blue_at.get(x)
            if nxt is None or nxt in seen:
                return out
            out.append(nxt)
            seen.add(nxt)
            x = other(nxt, x)
            current = nxt

    def degree(x: int) -> int:
        return (1 if x in blue_at else 0) + (1 if x in red_at else 0)

    def edge_seq_to_pairs(seq: list[int]) -> list[tuple[Optional[int], Optional[int]]]:
        pairs: list[tuple[Optional[int], Optional[int]]] = []
        i = 0
        if seq[0] in blue:
            while i < len(seq):
                b = seq[i]
                r = seq[i + 1] if i + 1 < len(seq) else None
                pairs.append((b, r))
                i += 2
        else:
            pairs.append((None, seq[0]))
            i = 1
            while i < len(seq):
                b = seq[i]
                r = seq[i + 1] if i + 1 < len(seq) else None
                pairs.append((b, r))
                i += 2
        return pairs

    def colored(pairs) -> float:
        c = 0.0
        for b, r in pairs:
            if r is not None:
                c += g.weight(r)
            if b is not None:
                c -= g.weight(b)
        return c

    # paths first: start at degree-1 vertices, smaller end-edge id first
    endpoints: list[tuple[int, int]] = []  # (end edge id, vertex)
    for eid in sorted(set(blue) | set(red)):
        u, v, _ = g.edge(eid)
        for x in (u, v):
            if degree(x) == 1:
                endpoints.append((eid, x))
    for eid, x in sorted(endpoints):
        if eid in seen:
            continue
        seq = walk(eid, x)
        pairs = edge_seq_to_pairs(seq)
        comps.append(AlternatingComponent("path", pairs, colored(pairs)))

    # remaining edges lie on cycles; start each at its smallest blue edge
    for eid in sorted(blue):
        if eid in seen:
            continue
        u, v, _ = g.edge(eid)
        start = min(u, v)
        seq = walk(eid, start)
        if len(seq) % 2 != 0:
            raise ContractError("alternating cycle with odd edge count")
        pairs = edge_seq_to_pairs(seq)
        if any(b is None or r is None for b, r in pairs):
            raise ContractError("cycle component with absent slot")
        comps.append(AlternatingComponent("cycle", pairs, colored(pairs)))
    for eid in sorted(red):
        if eid not in seen:
            raise ContractError(f"red edge {eid} missed by decomposition")
    return comps


def order_components(
    comps: Iterable[AlternatingComponent],
    tolerance: float = DEFAULT_TOLERANCE,
) -> list[AlternatingComponent]:
    """Positive colored weight first, then negative, then exactly-zero;
    first-seen order within each class. When the total colored weight is
    positive, every prefix sum is positive (asserted)."""
    comps = list(comps)

    def rank(c: AlternatingComponent) -> int:
        if c.colored_weight > 0:
            return 0
        if c.colored_weight < 0:
            return 1
        return 2

    ordered = sorted(comps, key=rank)
    total = sum(c.colored_weight for c in comps)
    if total > tolerance:
        running = 0.0
        for c in ordered:
            running += c.colored_weight
            if running <= -abs(tolerance):
                raise ContractError(f"non-positive colored-weight prefix {running}")
    return ordered


def prefix_sums(g: Graph, comp: AlternatingComponent) -> list[float]:
    """c(0..k): colored weight of the first i pairs, absent slots contribute 0."""
    sums = [0.0]
    for b, r in comp.pairs:
        step = (g.weight(r) if r is not None else 0.0) - \
               (g.weight(b) if b is not None else 0.0)
        sums.append(sums[-1] + step)
    return sums


def prefix_min_index(g: Graph, comp: AlternatingComponent, credit: float = 0.0) -> int:
    """Smallest index minimizing credit + c(i) over i in 0..k.

    The argmin is invariant under the credit shift; the credit matters for
    the caller's case selection via the credited minimum value.
    """
    sums = prefix_sums(g, comp)
    best = 0
    for i, s in enumerate(sums):
        if credit + s < credit + sums[best] - 1e-15:
            best = i
    return best


def _rotated(comp: AlternatingComponent, i_min: int) -> AlternatingComponent:
    """Cycle rotated so the pair after the prefix minimum comes first."""
    pairs = comp.pairs[i_min:] + comp.pairs[:i_min]
    return AlternatingComponent("cycle", pairs, comp.colored_weight)


@dataclass
class _Unit:
    """Atomic op group: optionally one red add, then one blue removal.

    Phase cuts are only legal at unit boundaries, so the transient overlap
    between an added red edge and its not-yet-removed blue neighbor stays
    inside a phase.
    """

    ops: list[ChangeOp]
    end_blue: Optional[int]   # blue edge removed by the unit's last op


def _units_for_range(g: Graph, comp: AlternatingComponent, lo: int, hi: int) -> list[_Unit]:
    """Units for pairs lo..hi (1-indexed, inclusive): an initial removal of
    the range's first blue, then per pair [add red, remove next blue]."""
    if not (1 <= lo <= hi <= comp.k()):
        raise DataError(f"malformed range {lo}..{hi} for k={comp.k()}")
    units: list[_Unit] = []
    first_blue = comp.pairs[lo - 1][0]
    if first_blue is not None:
        bu, bv, bw = g.edge(first_blue)
        units.append(_Unit([ChangeOp("remove", bu, bv, bw)], first_blue))
    for j in range(lo, hi + 1):
        ops: list[ChangeOp] = []
        red = comp.pairs[j - 1][1]
        if red is not None:
            ru, rv, rw = g.edge(red)
            ops.append(ChangeOp("add", ru, rv, rw))
        end_blue = None
        if j + 1 <= hi:
            nxt = comp.pairs[j][0]
            if nxt is None:
                raise ContractError("interior pair with absent blue slot")
            nu, nv, nw = g.edge(nxt)
            ops.append(ChangeOp("remove", nu, nv, nw))
            end_blue = nxt
        if ops:
            units.append(_Unit(ops, end_blue))
    return units


def replace_blue_red(
    g: Graph,
    comp: AlternatingComponent,
    rng: str,
    split: Optional[int] = None,
) -> list[ChangeOp]:
    """Flat op sequence for one ReplaceBlueRed call.

    rng is "whole", "suffix" (pairs split+1..k) or "prefix" (pairs
    1..split). Every red edge in range is added exactly once, every blue
    edge in range removed exactly once, removals of a red's blue neighbors
    happening no later than one op after the add.
    """
    k = comp.k()
    if rng == "whole":
        units = _units_for_range(g, comp, 1, k)
    elif rng == "suffix":
        if split is None or not (0 < split < k):
            raise DataError(f"suffix split {split} out of range for k={k}")
        units = _units_for_range(g, comp, split + 1, k)
    elif rng == "prefix":
        if split is None or not (0 < split < k):
            raise DataError(f"prefix split {split} out of range for k={k}")
        units = _units_for_range(g, comp, 1, split)
    else:
        raise DataError(f"unknown range {rng!r}")
    return [op for u in units for op in u.ops]


class _PhaseBuilder:
    """Groups units into phases, cutting after every light blue removal."""

    def __init__(self, light_threshold: float, budget: int) -> None:
        self.light = light_threshold
        self.budget = budget
        self.phases: list[Phase] = []
        self._ops: list[ChangeOp] = []

    def feed(self, g: Graph, units: list[_Unit]) -> None:
        for u in units:
            self._ops.extend(u.ops)
            if u.end_blue is not None and g.weight(u.end_blue) < self.light:
                self.close()
        self.close()

    def add_phase(self, ops: list[ChangeOp]) -> None:
        self.close()
        self.phases.append(Phase(list(ops)))

    def close(self) -> None:
        if self._ops:
            if len(self._ops) > self.budget:
                raise ContractError(
                    f"phase of {len(self._ops)} ops exceeds budget {self.budget}")
            self.phases.append(Phase(self._ops))
            self._ops = []


def _prepass_good_edges(
    g: Graph,
    work: Matching,
    target: Matching,
    builder: _PhaseBuilder,
) -> None:
    """Eagerly emit 3-op phases for every target-only edge that outweighs
    the sum of its current neighbors; never decreases the weight."""
    neighbor_sum: dict[int, float] = {}
    blocked_by: dict[int, list[int]] = {}
    queue = _LinkedList()
    queued: set[int] = set()

    def is_good(te: int) -> bool:
        return g.weight(te) > neighbor_sum[te]

    for te in target.edges:
        if te in work.edges:
            continue
        u, v, _ = g.edge(te)
        blockers = {b for b in (work.matched_edge(u), work.matched_edge(v))
                    if b is not None}
        neighbor_sum[te] = sum(g.weight(b) for b in blockers)
        for b in blockers:
            blocked_by.setdefault(b, []).append(te)
        if is_good(te):
            queue.append(te)
            queued.add(te)

    while queue:
        te = queue.pop_head()
        queued.discard(te)
        del neighbor_sum[te]
        u, v, w = g.edge(te)
        blockers = sorted({b for b in (work.matched_edge(u), work.matched_edge(v))
                           if b is not None})
        ops = [ChangeOp("add", u, v, w)]
        for b in blockers:
            bu, bv, bw = g.edge(b)
            ops.append(ChangeOp("remove", bu, bv, bw))
        for b in blockers:
            work.remove(b)
            for other in blocked_by.pop(b, ()):
                if other not in neighbor_sum:
                    continue
                neighbor_sum[other] -= g.weight(b)
                if other not in queued and is_good(other):
                    queue.append(other)
                    queued.add(other)
        work.add(te)
        builder.add_phase(ops)


def plan_mwm(
    g: Graph,
    source: Matching,
    target: Matching,
    eps: float,
    good_edge_prepass: bool = True,
    tolerance: float = DEFAULT_TOLERANCE,
    _allow_nonincreasing: bool = False,
    _strip_isolated_blues: bool = False,
) -> TransformationScript:
    """Plan phases transforming source into a superset of target.

    Requires 0 < eps <= 1/2 and w(target) > w(source); for the other
    direction use plan_mwm_auto, which plans on swapped arguments and
    reverses the script. Emitted scripts satisfy: op-end weight >=
    w(source) - W, phase-end weight >= max(w(source) - W,
    (1 - eps) w(source)), phases of at most 3 ceil(1/eps) + 3 ops.
    Runs in O(|source| + |target|).
    """
    if not (0 < eps <= 0.5):
        raise DataError(f"epsilon {eps} outside (0, 1/2]")
    for name, m in (("source", source), ("target", target)):
        report = validate_matching(g, m)
        if not report:
            raise DataError(f"{name} matching invalid: {report.reason}")
    budget = mwm_phase_budget(eps)
    if set(source.edges) == set(target.edges):
        return TransformationScript("mwm", budget, eps, [])
    w_source = sum(g.weight(eid) for eid in source.edges)
    w_target = sum(g.weight(eid) for eid in target.edges)
    if w_target <= w_source and not _allow_nonincreasing:
        raise DataError(
            f"w(target) = {w_target} <= w(source) = {w_source}; "
            "plan_mwm requires an improving target - use plan_mwm_auto, "
            "which plans the swapped direction and reverses the script")

    max_src_weight = max((g.weight(eid) for eid in source.edges), default=0.0)
    light_threshold = eps * w_source
    op_floor = w_source - max_src_weight - max(tolerance, tolerance * abs(w_source))
    builder = _PhaseBuilder(light_threshold, budget)
    work = source.copy()

    if good_edge_prepass:
        _prepass_good_edges(g, work, target, builder)

    comps = order_components(decompose(g, work, target), tolerance)
    surplus = sum(g.weight(eid) for eid in work.edges) - w_source  # pre-pass gain

    current = w_source + surplus

    def feed_checked(units: list[_Unit]) -> None:
        nonlocal current
        for u in units:
            for op in u.ops:
                current += op.w if op.kind == "add" else -op.w
                if current < op_floor:
                    raise ContractError(
                        f"op-end weight {current} below floor {op_floor}")
        builder.feed(g, units)

    isolated_blues: list[int] = []
    for comp in comps:
        if comp.k() == 1 and comp.pairs[0][1] is None:
            # isolated source-only edge: kept (superset semantics) unless the
            # caller needs an exact final state for script reversal
            isolated_blues.append(comp.pairs[0][0])
            continue
        i_min = prefix_min_index(g, comp, surplus)
        sums = prefix_sums(g, comp)
        if comp.kind == "cycle":
            if i_min > 0:
                comp = _rotated(comp, i_min)
                sums = prefix_sums(g, comp)
                i_min = prefix_min_index(g, comp, surplus)
            if surplus + sums[i_min] < -max(tolerance, tolerance * abs(w_source)):
                raise ContractError(
                    "rotated cycle still has negative credited minimum")
            feed_checked(_units_for_range(g, comp, 1, comp.k()))
        elif surplus + sums[i_min] >= 0:
            feed_checked(_units_for_range(g, comp, 1, comp.k()))
        else:
            if not (0 < i_min < comp.k()):
                raise ContractError(f"split index {i_min} not interior")
            feed_checked(_units_for_range(g, comp, i_min + 1, comp.k()))
            feed_checked(_units_for_range(g, comp, 1, i_min))
        builder.close()
        surplus += comp.colored_weight
        if surplus < -max(tolerance, tolerance * abs(w_source)):
            raise ContractError(f"negative running surplus {surplus}")

    if _strip_isolated_blues:
        # trailing 1-op phases; at this point the running weight is at least
        # w(target) plus the stripped edges, so every floor holds
        for eid in sorted(isolated_blues):
            u, v, w = g.edge(eid)
            current -= w
            if current < op_floor:
                raise ContractError(
                    f"op-end weight {current} below floor {op_floor}")
            builder.add_phase([ChangeOp("remove", u, v, w)])

    script = TransformationScript("mwm", budget, eps, builder.phases)
    script.validate()
    return script


def plan_mwm_auto(
    g: Graph,
    source: Matching,
    target: Matching,
    eps: float,
    good_edge_prepass: bool = True,
    tolerance: float = DEFAULT_TOLERANCE,
) -> TransformationScript:
    """plan_mwm for either direction.

    When the target is not heavier, plans target -> source and reverses the
    script; the floors then reference the lighter endpoint, matching
    check_guarantee's convention.
    """
    w_source = sum(g.weight(eid) for eid in source.edges)
    w_target = sum(g.weight(eid) for eid in target.edges)
    if set(source.edges) == set(target.edges):
        return TransformationScript("mwm", mwm_phase_budget(eps), eps, [])
    if w_target > w_source:
        return plan_mwm(g, source, target, eps, good_edge_prepass, tolerance)
    script = plan_mwm(g, target, source, eps, good_edge_prepass, tolerance,
                      _allow_nonincreasing=(w_target == w_source),
                      _strip_isolated_blues=True)
    return script.reversed_script()
