"""Update-stream simulation driver producing per-step recourse traces."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, Optional

from .graph import BudgetError, DataError, Graph, UpdateEvent
from .oracles import OracleBudget, max_matching_exact
from .wrapper import (BatchRecompute, GreedyMaximalMatching, InnerAlgorithm,
                      TraceRow, WrappedMatching)


def event_label(ev: UpdateEvent) -> str:
    if ev.kind == "+e":
        return f"+e {ev.u} {ev.v}"
    if ev.kind == "-e":
        return f"-e {ev.u} {ev.v}"
    if ev.kind == "+v":
        return f"+v {ev.u}"
    return f"-v {ev.u}"


def make_inner(name: str, g: Graph) -> InnerAlgorithm:
    """Inner algorithm factory: "greedy" or "batch[:eps_in]"."""
    if name == "greedy":
        return GreedyMaximalMatching(g)
    if name == "batch":
        return BatchRecompute(g)
    if name.startswith("batch:"):
        return BatchRecompute(g, eps_in=float(name.split(":", 1)[1]))
    raise DataError(f"unknown inner algorithm {name!r}")


@dataclass
class SimulationResult:
    rows: list[TraceRow]
    max_recourse: int
    mean_recourse: float
    worst_ratio: Optional[float]     # OPT / output, when oracle checking

    def header_fields(self) -> dict:
        return {
            "max_recourse": self.max_recourse,
            "mean_recourse": round(self.mean_recourse, 6),
            "worst_ratio": None if self.worst_ratio is None
            else round(self.worst_ratio, 6),
        }


def run_simulation(
    g: Graph,
    algo,
    events: Iterable[UpdateEvent],
    oracle_check: bool = False,
    oracle_budget: OracleBudget = OracleBudget(),
    inner_of: Optional[Callable[[], int]] = None,
) -> SimulationResult:
    """Apply events to g, feed them to algo, and record per-step traces.

    algo is a WrappedMatching or a bare InnerAlgorithm; both expose
    handle_update(ev, delta) plus size/weight queries. With oracle_check,
    every step compares the output size against the exact optimum (graphs
    beyond the oracle budget are refused).
    """
    rows: list[TraceRow] = []
    total = 0
    max_rec = 0
    worst_ratio: Optional[float] = None
    for step, ev in enumerate(events, start=1):
        delta = g.apply_update(ev)
        out = algo.handle_update(ev, delta)
        rec = out.recourse()
        total += rec
        max_rec = max(max_rec, rec)
        opt_size: Optional[int] = None
        if oracle_check:
            if g.num_vertices() > oracle_budget.max_vertices_matching:
                raise BudgetError(
                    f"oracle check refused: {g.num_vertices()} vertices "
                    f"> budget {oracle_budget.max_vertices_matching}")
            opt_size = len(max_matching_exact(g, oracle_budget))
            size = algo.current_size()
            if opt_size > 0 and size > 0:
                ratio = opt_size / size
                worst_ratio = ratio if worst_ratio is None else max(worst_ratio, ratio)
            elif opt_size > 0 and size == 0:
                worst_ratio = float("inf")
        if isinstance(algo, WrappedMatching):
            inner_size = algo.inner.current_size()
            phase = algo.last_window_phase
        else:
            inner_size = algo.current_size()
            phase = ""
        rows.append(TraceRow(
            step=step,
            event=event_label(ev),
            recourse_added=len(out.added),
            recourse_removed=len(out.removed),
            output_size=algo.current_size(),
            output_weight=round(algo.current_weight(), 9),
            inner_size=inner_size,
            window_phase=phase,
            opt_size=opt_size,
        ))
    mean = total / len(rows) if rows else 0.0
    return SimulationResult(rows, max_rec, mean, worst_ratio)


def trace_csv_rows(result: SimulationResult) -> list[list]:
    rows = [["step", "event", "recourse_added", "recourse_removed",
             "output_size", "output_weight", "inner_size", "window_phase",
             "opt_size"]]
    for r in result.rows:
        rows.append([r.step, r.event, r.recourse_added, r.recourse_removed,
                     r.output_size, repr(r.output_weight), r.inner_size,
                     r.window_phase, "" if r.opt_size is None else r.opt_size])
    return rows
