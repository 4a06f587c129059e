"""Command-line surface: transform, replay, simulate, adversary, oracle,
bench. Exit codes: 0 ok / guarantee holds, 1 usage, 2 data, 3 contract."""

from __future__ import annotations

import argparse
import csv
import json
import random
import sys
import time
from pathlib import Path
from typing import Optional

from . import adversary as adv
from .bench import (available_index_kinds, index_benchmark,
                    matching_planner_scaling, msf_planner_scaling)
from .gen import DEFAULT_SEED, random_update_stream
from .graph import (BudgetError, ContractError, DataError, Graph,
                    solution_stats)
from .io import (RunManifest, emit_edge_set, parse_forest, parse_graph,
                 parse_matching, parse_updates, emit_updates)
from .mcm import plan_mcm
from .msf import plan_msf
from .mwm import plan_mwm_auto
from .oracles import (OracleBudget, exhaustive_transform_search,
                      max_matching_exact, max_weight_matching_exact,
                      msf_exact)
from .script import TransformationScript, check_guarantee, replay, \
    report_to_csv_rows
from .sim import make_inner, run_simulation, trace_csv_rows
from .wrapper import WrappedMatching

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_CONTRACT = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _write_csv(path: str, rows: list[list], manifest: RunManifest) -> None:
    with open(path, "w", newline="") as fh:
        fh.write(f"# manifest: {json.dumps(json.loads(manifest.to_json()), sort_keys=True)}\n")
        writer = csv.writer(fh)
        writer.writerows(rows)


def _read(path: str, label: str, manifest: RunManifest) -> str:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise DataError(f"cannot read {label} file {path}: {exc}") from None
    manifest.add_input(label, text)
    return text


def _finish_manifest(manifest: RunManifest, args) -> None:
    if getattr(args, "manifest_out", None):
        Path(args.manifest_out).write_text(manifest.to_json() + "\n")


def _cmd_transform(args) -> int:
    manifest = RunManifest("transform", {
        "problem": args.problem, "epsilon": args.epsilon,
        "index": args.index, "prepass": not args.no_prepass,
        "seed": args.seed, "tolerance": args.tolerance,
    })
    g = parse_graph(_read(args.graph, "graph", manifest))
    t0 = time.perf_counter()
    if args.problem == "mcm":
        src = parse_matching(_read(args.source, "from", manifest), g)
        tgt = parse_matching(_read(args.target, "to", manifest), g)
        script = plan_mcm(g, src, tgt)
    elif args.problem == "mwm":
        if args.epsilon is None or not (0 < args.epsilon <= 0.5):
            raise DataError(f"mwm needs --epsilon in (0, 1/2], got {args.epsilon}")
        src = parse_matching(_read(args.source, "from", manifest), g)
        tgt = parse_matching(_read(args.target, "to", manifest), g)
        script = plan_mwm_auto(g, src, tgt, args.epsilon,
                               good_edge_prepass=not args.no_prepass,
                               tolerance=args.tolerance)
    else:
        src = parse_forest(_read(args.source, "from", manifest), g)
        tgt = parse_forest(_read(args.target, "to", manifest), g)
        script = plan_msf(g, src, tgt, args.index, args.tolerance)
    wall = time.perf_counter() - t0
    report = replay(g, src.edge_ids(), script,
                    "per-op" if args.problem == "mwm" else "per-phase",
                    args.tolerance)
    obj = script.to_json_obj()
    obj["manifest"] = json.loads(manifest.to_json())
    Path(args.out).write_text(json.dumps(obj, indent=1) + "\n")
    _finish_manifest(manifest, args)
    floor = report.worst_size if args.problem == "mcm" else report.worst_weight
    print(f"phases={len(script.phases)} budget={script.budget} "
          f"min_quality={floor} wall_seconds={wall:.4f}")
    return EXIT_OK


def _cmd_replay(args) -> int:
    manifest = RunManifest("replay", {
        "problem": args.problem, "epsilon": args.epsilon,
        "granularity": args.granularity, "tolerance": args.tolerance,
    })
    g = parse_graph(_read(args.graph, "graph", manifest))
    script = TransformationScript.from_json(_read(args.script, "script", manifest))
    if args.problem and args.problem != script.problem:
        raise DataError(f"--problem {args.problem} != script problem {script.problem}")
    if script.problem in ("mcm", "mwm"):
        src = parse_matching(_read(args.source, "from", manifest), g)
        tgt = parse_matching(_read(args.target, "to", manifest), g)
    else:
        src = parse_forest(_read(args.source, "from", manifest), g)
        tgt = parse_forest(_read(args.target, "to", manifest), g)
    granularity = args.granularity
    if granularity is None:
        granularity = "per-op" if script.problem == "mwm" else "per-phase"
    report = replay(g, src.edge_ids(), script, granularity, args.tolerance)
    eps = args.epsilon if args.epsilon is not None else script.epsilon
    result = check_guarantee(report, solution_stats(g, src),
                             solution_stats(g, tgt), script.problem, eps,
                             args.tolerance)
    if args.csv:
        _write_csv(args.csv, report_to_csv_rows(report), manifest)
    _finish_manifest(manifest, args)
    if result.ok:
        print(f"guarantee holds: boundaries={len(report.boundaries)} "
              f"worst_size={report.worst_size} worst_weight={report.worst_weight}")
        return EXIT_OK
    where = result.boundary
    print(f"guarantee violated: {result.reason}"
          + (f" at boundary {where.index} (phase {where.phase}, op {where.op})"
             if where else ""))
    return EXIT_DATA


def _cmd_simulate(args) -> int:
    manifest = RunManifest("simulate", {
        "inner": args.inner, "epsilon": args.epsilon, "wrap": not args.no_wrap,
        "weighted": args.weighted, "psi": args.psi, "seed": args.seed,
        "oracle_check": args.oracle_check, "n": args.n,
        "random_updates": args.random_updates, "tolerance": args.tolerance,
        "constants": {"recourse_factor": 16, "sim_factor": 15,
                      "small_factor": 12, "window_ratio_factor": 1.25},
    })
    if args.updates:
        events = parse_updates(_read(args.updates, "updates", manifest))
    elif args.random_updates:
        rng = random.Random(args.seed)
        w_hi = args.psi if args.weighted else 1.0
        events = random_update_stream(rng, args.n, args.random_updates,
                                      w_lo=1.0, w_hi=w_hi, vertex_ops=True)
        manifest.add_input("updates", emit_updates(events))
    else:
        raise DataError("need --updates FILE or --random-updates N")
    g = Graph()
    for v in range(args.n):
        g.ensure_vertex(v)
    inner = make_inner(args.inner, g)
    if args.no_wrap:
        algo = inner
    else:
        algo = WrappedMatching(g, inner, args.epsilon,
                               weighted=args.weighted, psi=args.psi)
    result = run_simulation(g, algo, events, oracle_check=args.oracle_check)
    if args.trace:
        _write_csv(args.trace, trace_csv_rows(result), manifest)
    _finish_manifest(manifest, args)
    ratio = result.worst_ratio
    print(f"steps={len(result.rows)} max_recourse={result.max_recourse} "
          f"mean_recourse={result.mean_recourse:.4f}"
          + (f" worst_approx_ratio={ratio:.4f}" if ratio is not None else ""))
    return EXIT_OK


def _subject_factory(name: str, eps: float):
    if name == "exact":
        return lambda g: adv.ExactPathMaintainer(g)
    if name == "greedy":
        from .wrapper import GreedyMaximalMatching
        return lambda g: GreedyMaximalMatching(g)
    if name == "static":
        return lambda g: adv.StaticSubject(g)
    if name.startswith("wrapped:"):
        inner_name = name.split(":", 1)[1]
        return lambda g: WrappedMatching(g, make_inner(inner_name, g), eps)
    raise DataError(f"unknown subject {name!r}")


def _cmd_adversary(args) -> int:
    manifest = RunManifest("adversary", {
        "mode": args.mode, "epsilon": args.epsilon, "n": args.n,
        "subject": args.subject, "rounds": args.rounds, "seed": args.seed,
        "constants": {"path_scale": adv.PATH_SCALE, "copy_scale": adv.COPY_SCALE,
                      "amortization": "per edge update"},
    })
    factory = _subject_factory(args.subject, args.epsilon)
    if args.mode == "full":
        events = adv.gen_fully_dynamic(args.epsilon, args.rounds, args.n)
        g = Graph()
        subject = factory(g)
        result = run_simulation(g, subject, events)
        if args.trace:
            _write_csv(args.trace, trace_csv_rows(result), manifest)
        _finish_manifest(manifest, args)
        print(f"mode=full updates={len(result.rows)} "
              f"amortized_recourse={result.mean_recourse:.4f} "
              f"max_recourse={result.max_recourse}")
        return EXIT_OK
    if args.mode == "incr":
        run, events = adv.run_incremental_adversary(factory, args.epsilon, args.n)
    else:
        run = adv.run_decremental_mirror(factory, args.epsilon, args.n)
        events = []
    if args.trace and events:
        g = Graph()
        result = run_simulation(g, factory(g), events)
        _write_csv(args.trace, trace_csv_rows(result), manifest)
    _finish_manifest(manifest, args)
    print(f"mode={args.mode} updates={run.total_updates} "
          f"amortized_recourse={run.amortized_recourse():.4f} "
          f"complete_fraction={run.complete_fraction():.3f} "
          f"copies={len(run.copies)} l={run.l}")
    return EXIT_OK


def _cmd_oracle(args) -> int:
    manifest = RunManifest("oracle", {"task": args.task})
    g = parse_graph(_read(args.graph, "graph", manifest))
    budget = OracleBudget()
    if args.task == "mcm":
        ids = max_matching_exact(g, budget)
        print(f"size={len(ids)}")
    elif args.task == "mwm":
        ids = max_weight_matching_exact(g, budget)
        print(f"size={len(ids)} weight={sum(g.weight(e) for e in ids)!r}")
    elif args.task == "msf":
        ids = msf_exact(g)
        print(f"size={len(ids)} weight={sum(g.weight(e) for e in ids)!r}")
    else:
        src = set(parse_matching(_read(args.source, "from", manifest), g).edge_ids())
        tgt = set(parse_matching(_read(args.target, "to", manifest), g).edge_ids())
        res = exhaustive_transform_search(
            g, src, tgt, args.delta, args.floor,
            floor_kind=args.floor_kind, granularity=args.search_granularity,
            budget=budget)
        print(f"feasible={res.feasible} explored={res.explored}"
              + ("" if res.feasible else f" note={res.note}"))
        _finish_manifest(manifest, args)
        return EXIT_OK
    if args.out:
        Path(args.out).write_text(emit_edge_set(g, ids))
    _finish_manifest(manifest, args)
    return EXIT_OK


def _cmd_bench(args) -> int:
    sizes = [int(s) for s in args.sizes.split(",")] if args.sizes else None
    if args.what == "index":
        kinds = available_index_kinds()
        rows = index_benchmark(kinds, n=args.n, ops=args.ops, seed=args.seed)
        for row in rows:
            print(f"{row.kind:18s} n={row.n} ops={row.ops} "
                  f"seconds={row.seconds:.4f}")
        return EXIT_OK
    if args.what == "planner":
        if args.problem == "msf":
            res = msf_planner_scaling(sizes or [1000, 10_000, 100_000],
                                      seed=args.seed, index_kind=args.index)
            model = "n*log(n)"
        else:
            res = matching_planner_scaling(args.problem,
                                           sizes or [1000, 10_000, 100_000],
                                           seed=args.seed)
            model = "n"
        for n, t, r in zip(res.sizes, res.seconds, res.ratios):
            print(f"n={n:>8} seconds={t:.4f} seconds/{model}={r:.3e}")
        print(f"ratio_spread={res.spread:.3f} (factor-3 fit: "
              f"{'yes' if res.fits_within(3.0) else 'NO'})")
        return EXIT_OK
    raise DataError(f"unknown bench target {args.what!r}")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="gradmorph",
                description="gradual transformation planners, verifier, "
                            "recourse wrapper, and adversary harness")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--tolerance", type=float, default=1e-9)
    p.add_argument("--manifest-out", default=None)
    sub = p.add_subparsers(dest="command", required=True)

    t = sub.add_parser("transform", help="plan a transformation script")
    t.add_argument("--problem", required=True, choices=("mcm", "mwm", "msf"))
    t.add_argument("--graph", required=True)
    t.add_argument("--from", dest="source", required=True)
    t.add_argument("--to", dest="target", required=True)
    t.add_argument("--out", required=True)
    t.add_argument("--epsilon", type=float, default=None)
    t.add_argument("--index", default="linkcut",
                   choices=("naive", "linkcut", "linkcut-pure", "linkcut-compiled"))
    t.add_argument("--no-prepass", action="store_true")
    t.set_defaults(fn=_cmd_transform)

    r = sub.add_parser("replay", help="replay a script and check guarantees")
    r.add_argument("--problem", default=None, choices=("mcm", "mwm", "msf"))
    r.add_argument("--graph", required=True)
    r.add_argument("--from", dest="source", required=True)
    r.add_argument("--to", dest="target", required=True)
    r.add_argument("--script", required=True)
    r.add_argument("--granularity", default=None, choices=("per-phase", "per-op"))
    r.add_argument("--epsilon", type=float, default=None)
    r.add_argument("--csv", default=None)
    r.set_defaults(fn=_cmd_replay)

    s = sub.add_parser("simulate", help="run a dynamic matching simulation")
    s.add_argument("--inner", required=True)
    s.add_argument("--epsilon", type=float, required=True)
    s.add_argument("--weighted", action="store_true")
    s.add_argument("--psi", type=float, default=1.0)
    s.add_argument("--no-wrap", action="store_true",
                   help="run the inner algorithm bare (control)")
    s.add_argument("--updates", default=None)
    s.add_argument("--random-updates", type=int, default=None)
    s.add_argument("--n", type=int, default=500)
    s.add_argument("--trace", default=None)
    s.add_argument("--oracle-check", action="store_true")
    s.set_defaults(fn=_cmd_simulate)

    a = sub.add_parser("adversary", help="run a lower-bound adversary")
    a.add_argument("--mode", required=True, choices=("full", "incr", "decr"))
    a.add_argument("--epsilon", type=float, required=True)
    a.add_argument("--n", type=int, required=True)
    a.add_argument("--subject", default="exact")
    a.add_argument("--rounds", type=int, default=10)
    a.add_argument("--trace", default=None)
    a.set_defaults(fn=_cmd_adversary)

    o = sub.add_parser("oracle", help="brute-force reference solvers")
    o.add_argument("--task", required=True, choices=("mcm", "mwm", "msf", "search"))
    o.add_argument("--graph", required=True)
    o.add_argument("--from", dest="source", default=None)
    o.add_argument("--to", dest="target", default=None)
    o.add_argument("--delta", type=int, default=3)
    o.add_argument("--floor", type=float, default=0.0)
    o.add_argument("--floor-kind", default="size", choices=("size", "weight"))
    o.add_argument("--search-granularity", default="phase", choices=("phase", "op"))
    o.add_argument("--out", default=None)
    o.set_defaults(fn=_cmd_oracle)

    b = sub.add_parser("bench", help="timing comparisons and scaling fits")
    b.add_argument("--what", required=True, choices=("index", "planner"))
    b.add_argument("--problem", default="msf", choices=("mcm", "mwm", "msf"))
    b.add_argument("--sizes", default=None)
    b.add_argument("--index", default="linkcut")
    b.add_argument("--n", type=int, default=2000)
    b.add_argument("--ops", type=int, default=20000)
    b.set_defaults(fn=_cmd_bench)
    return p


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.fn(args)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    except BudgetError as exc:
        print(f"gradmorph: budget: {exc}", file=sys.stderr)
        return EXIT_DATA
    except DataError as exc:
        print(f"gradmorph: data: {exc}", file=sys.stderr)
        return EXIT_DATA
    except ContractError as exc:
        print(f"gradmorph: contract: {exc}", file=sys.stderr)
        return EXIT_CONTRACT


if __name__ == "__main__":
    raise SystemExit(main())
