"""Phase/operation scripts shared by all planners, plus the replay verifier.

Scripts are self-contained (ops carry endpoints and weights) and serialize
to JSON; replay checks them mechanically against a graph and a source
solution, recording validity and quality at every requested boundary.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable, Optional

from .graph import (DEFAULT_TOLERANCE, ContractError, DataError, Graph,
                    UnionFind, SolutionStats)

PROBLEMS = ("mcm", "mwm", "msf")


@dataclass(frozen=True)
class ChangeOp:
    kind: str  # "add" | "remove"
    u: int
    v: int
    w: float

    def inverted(self) -> "ChangeOp":
        return ChangeOp("remove" if self.kind == "add" else "add", self.u, self.v, self.w)


@dataclass
class Phase:
    ops: list[ChangeOp] = field(default_factory=list)


@dataclass
class TransformationScript:
    problem: str
    budget: int
    epsilon: Optional[float] = None
    phases: list[Phase] = field(default_factory=list)

    def validate(self) -> None:
        if self.problem not in PROBLEMS:
            raise DataError(f"unknown problem tag {self.problem!r}")
        for i, ph in enumerate(self.phases):
            if not ph.ops:
                raise ContractError(f"phase {i} is empty")
            if len(ph.ops) > self.budget:
                raise ContractError(
                    f"phase {i} has {len(ph.ops)} ops > declared budget {self.budget}")

    def num_ops(self) -> int:
        return sum(len(p.ops) for p in self.phases)

    def reversed_script(self) -> "TransformationScript":
        """Undo script: phases in reverse order, each op inverted, op order
        within a phase reversed (so removals still precede the adds that
        reuse their endpoints)."""
        phases = [Phase([op.inverted() for op in reversed(ph.ops)])
                  for ph in reversed(self.phases)]
        return TransformationScript(self.problem, self.budget, self.epsilon, phases)

    # -- serialization --------------------------------------------------

    def to_json_obj(self) -> dict:
        return {
            "problem": self.problem,
            "epsilon": self.epsilon,
            "budget": self.budget,
            "phases": [
                {"ops": [{"op": op.kind, "u": op.u, "v": op.v, "w": op.w}
                         for op in ph.ops]}
                for ph in self.phases
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj(), indent=1, sort_keys=False)

    @staticmethod
    def from_json_obj(obj: dict) -> "TransformationScript":
        try:
            phases = [Phase([ChangeOp(o["op"], int(o["u"]), int(o["v"]), float(o["w"]))
                             for o in ph["ops"]])
                      for ph in obj["phases"]]
            eps = obj.get("epsilon")
            script = TransformationScript(
                obj["problem"],
                int(obj["budget"]),
                None if eps is None else float(eps),
                phases,
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise DataError(f"malformed script JSON: {exc}") from exc
        return script

    @staticmethod
    def from_json(text: str) -> "TransformationScript":
        try:
            obj = json.loads(text)
        except json.JSONDecodeError as exc:
            raise DataError(f"script is not valid JSON: {exc}") from exc
        return TransformationScript.from_json_obj(obj)


@dataclass(frozen=True)
class Boundary:
    index: int
    phase: int           # -1 for the initial snapshot
    op: Optional[int]    # None for phase-end rows and the initial snapshot
    valid: bool
    size: int
    weight: float


@dataclass
class ReplayReport:
    problem: str
    granularity: str
    boundaries: list[Boundary]
    final_edges: frozenset[int]
    worst_size: int
    worst_weight: float
    max_phase_ops: int
    phase_op_counts: list[int]

    def phase_ends(self) -> list[Boundary]:
        return [b for b in self.boundaries if b.op is None and b.phase >= 0]


def _matching_valid(g: Graph, state: set[int], exempt: set[int]) -> bool:
    """Matching check with the phase-atomicity convention: edges scheduled
    for removal later in the current phase are ignored."""
    seen: set[int] = set()
    for eid in state:
        if eid in exempt:
            continue
        u, v, _ = g.edge(eid)
        if u in seen or v in seen:
            return False
        seen.add(u)
        seen.add(v)
    return True


def _forest_valid(g: Graph, state: set[int]) -> bool:
    uf = UnionFind(g.vertices)
    for eid in state:
        u, v, _ = g.edge(eid)
        if not uf.union(u, v):
            return False
    graph_labels = g.components()
    forest_labels = uf.labels()
    return all(graph_labels[v] == forest_labels[v] for v in g.vertices)


def replay(
    g: Graph,
    source: Iterable[int],
    script: TransformationScript,
    granularity: str = "per-phase",
    tolerance: float = DEFAULT_TOLERANCE,
) -> ReplayReport:
    """Deterministically apply the script to the source edge set.

    Structural op failures (adding a present edge, removing an absent one,
    referencing an edge missing from g) raise DataError naming the phase
    and op; validity problems are recorded as data in the report.
    """
    if granularity not in ("per-phase", "per-op"):
        raise DataError(f"unknown granularity {granularity!r}")
    script.validate()
    state: set[int] = set(source)
    weight = sum(g.weight(eid) for eid in state)
    boundaries: list[Boundary] = []
    per_op = granularity == "per-op"

    def snapshot(phase: int, op: Optional[int], exempt: set[int]) -> None:
        if script.problem in ("mcm", "mwm"):
            valid = _matching_valid(g, state, exempt)
        else:
            valid = _forest_valid(g, state)
        boundaries.append(Boundary(len(boundaries), phase, op, valid, len(state), weight))

    snapshot(-1, None, set())
    for pi, phase in enumerate(script.phases):
        # resolve ops against g up front so errors name their location
        resolved: list[tuple[ChangeOp, int]] = []
        for oi, op in enumerate(phase.ops):
            if not g.has_edge(op.u, op.v):
                raise DataError(f"phase {pi} op {oi}: edge ({op.u},{op.v}) not in graph")
            eid = g.edge_id(op.u, op.v)
            gw = g.weight(eid)
            if abs(gw - op.w) > max(tolerance, tolerance * abs(gw)):
                raise DataError(f"phase {pi} op {oi}: recorded weight {op.w} "
                                f"!= graph weight {gw}")
            resolved.append((op, eid))
        pending_removals = {eid for op, eid in resolved if op.kind == "remove"}
        for oi, (op, eid) in enumerate(resolved):
            if op.kind == "add":
                if eid in state:
                    raise DataError(f"phase {pi} op {oi}: adding present edge "
                                    f"({op.u},{op.v})")
                state.add(eid)
                weight += g.weight(eid)
            elif op.kind == "remove":
                if eid not in state:
                    raise DataError(f"phase {pi} op {oi}: removing absent edge "
                                    f"({op.u},{op.v})")
                state.remove(eid)
                weight -= g.weight(eid)
                pending_removals.discard(eid)
            else:
                raise DataError(f"phase {pi} op {oi}: unknown op kind {op.kind!r}")
            if per_op and oi < len(resolved) - 1:
                snapshot(pi, oi, pending_removals & state)
        snapshot(pi, None, set())

    worst_size = min(b.size for b in boundaries)
    worst_weight = min(b.weight for b in boundaries)
    counts = [len(p.ops) for p in script.phases]
    return ReplayReport(
        problem=script.problem,
        granularity=granularity,
        boundaries=boundaries,
        final_edges=frozenset(state),
        worst_size=worst_size,
        worst_weight=worst_weight,
        max_phase_ops=max(counts, default=0),
        phase_op_counts=counts,
    )


@dataclass
class GuaranteeResult:
    ok: bool
    reason: str = ""
    boundary: Optional[Boundary] = None

    def __bool__(self) -> bool:
        return self.ok


def check_guarantee(
    report: ReplayReport,
    source_stats: SolutionStats,
    target_stats: SolutionStats,
    problem: str,
    epsilon: Optional[float] = None,
    tolerance: float = DEFAULT_TOLERANCE,
) -> GuaranteeResult:
    """Check the per-problem quality floor at every boundary of the report.

    mcm: phase-end sizes >= min(|source|, |target|-1), validity at phase
    ends. mwm: phase-end weight >= max(w-W, (1-eps)w) and op-end weight
    >= w-W, both referenced to the lighter of source/target (the reverse
    convention for reversed scripts). msf: phase-end weight <= max of the
    two totals, validity, and phases of at most two ops.
    """
    if problem != report.problem:
        raise DataError(f"problem tag mismatch: report={report.problem!r} "
                        f"check={problem!r}")
    phase_ends = report.phase_ends()

    if problem == "mcm":
        floor = min(source_stats.size, target_stats.size - 1)
        for b in phase_ends:
            if not b.valid:
                return GuaranteeResult(False, "invalid matching at phase end", b)
            if b.size < floor:
                return GuaranteeResult(False, f"size {b.size} < floor {floor}", b)
        return GuaranteeResult(True)

    if problem == "mwm":
        if epsilon is None or not (0 < epsilon <= 0.5):
            raise DataError(f"mwm check needs epsilon in (0, 1/2], got {epsilon}")
        anchor = source_stats if source_stats.total_weight <= target_stats.total_weight \
            else target_stats
        base = anchor.total_weight
        big_w = anchor.max_edge_weight
        tol = max(tolerance, tolerance * abs(base))
        op_floor = base - big_w - tol
        phase_floor = max(base - big_w, (1.0 - epsilon) * base) - tol
        if report.granularity == "per-op":
            for b in report.boundaries:
                if b.weight < op_floor:
                    return GuaranteeResult(
                        False, f"op-end weight {b.weight} < {base} - {big_w}", b)
        for b in phase_ends:
            if not b.valid:
                return GuaranteeResult(False, "invalid matching at phase end", b)
            if b.weight < phase_floor:
                return GuaranteeResult(
                    False, f"phase-end weight {b.weight} < floor {phase_floor}", b)
        return GuaranteeResult(True)

    if problem == "msf":
        ceiling = max(source_stats.total_weight, target_stats.total_weight)
        scale = max(1.0, abs(ceiling))
        tol = max(tolerance, tolerance * scale)
        for i, count in enumerate(report.phase_op_counts):
            if count > 2:
                return GuaranteeResult(False, f"phase {i} has {count} ops > 2", None)
        for b in phase_ends:
            if not b.valid:
                return GuaranteeResult(False, "invalid forest at phase end", b)
            if b.weight > ceiling + tol:
                return GuaranteeResult(
                    False, f"phase-end weight {b.weight} > ceiling {ceiling}", b)
        return GuaranteeResult(True)

    raise DataError(f"unknown problem {problem!r}")


def report_to_csv_rows(report: ReplayReport) -> list[list]:
    rows = [["boundary_index", "phase", "op", "valid", "size", "weight"]]
    for b in report.boundaries:
        rows.append([b.index, b.phase, "" if b.op is None else b.op,
                     int(b.valid), b.size, repr(b.weight)])
    return rows
