"""Command-line interface: ``grundy <subcommand> ...``.

Vertices are printed 1-based, matching DIMACS files.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from grundy import bench
from grundy.closed_form import m1_bound
from grundy.exact import solve_exact
from grundy.exceptions import GrundyError
from grundy.heuristics import initial_bounds, m_t
from grundy.ilp.backends import CommandBackend, ScipyBackend, default_backend
from grundy.ilp.cutloop import CutSchedule, cutting_plane_root
from grundy.ilp.lpfile import emit_lp
from grundy.ilp.model import build_model
from grundy.instance_io import InstanceSpec, format_cset, make_rng, write_dimacs
from grundy.tabu import TabuLimits, improve_loop, run_tabu


def _one_based(seq):
    return [v + 1 for v in seq]


def _emit(args, payload: dict) -> None:
    if args.json:
        print(json.dumps(payload, sort_keys=True))
    elif args.csv:
        keys = list(payload)
        print(",".join(keys))
        print(",".join(" ".join(map(str, v)) if isinstance(v, list) else str(v) for v in payload.values()))
    else:
        for k, v in payload.items():
            if isinstance(v, list):
                v = " ".join(map(str, v))
            print(f"{k}: {v}")


def _spec(args) -> InstanceSpec:
    if not args.instance:
        raise GrundyError("--instance is required for this subcommand")
    return InstanceSpec(args.instance, args.cset, args.seed)


def cmd_generate(args) -> int:
    spec = _spec(args)
    inst = spec.build()
    text = write_dimacs(inst.graph, comment=f"generated from {args.instance}")
    if args.out:
        Path(args.out).write_text(text)
        if args.cset_out:
            Path(args.cset_out).write_text(format_cset(inst.closed, inst.n))
    else:
        sys.stdout.write(text)
    return 0


def cmd_bounds(args) -> int:
    inst = _spec(args).build()
    b = initial_bounds(inst, make_rng(args.seed))
    out = {"n": inst.n, "m1": m1_bound(inst), "lb": b.lb, "ub": b.ub, "sequence": _one_based(b.witness)}
    for t in args.t or []:
        out[f"m{t}"] = m_t(inst, t)
    _emit(args, out)
    return 0


def cmd_tabu(args) -> int:
    inst = _spec(args).build()
    rng = make_rng(args.seed)
    limits = TabuLimits(max_iters=args.max_iters, max_time=args.max_secs or 30.0)
    if args.k:
        res = run_tabu(inst, args.k, limits, rng, altsol=not args.no_altsol)
        out = {"status": res.status, "iterations": res.iterations, "length": len(res.sequence or ()),
               "sequence": _one_based(res.sequence or ())}
    else:
        b = initial_bounds(inst, rng)
        best = improve_loop(inst, b.witness, limits, rng, ub=b.ub, altsol=not args.no_altsol)
        out = {"lb_initial": b.lb, "lb": len(best), "ub": b.ub, "sequence": _one_based(best)}
    _emit(args, out)
    return 0


def cmd_solve(args) -> int:
    spec = _spec(args)
    if args.engine == "dfs" and args.skip_heuristics:
        res = solve_exact(spec.build(), max_secs=args.max_secs, rng=args.seed)
        _emit(args, {"status": res.status.value, "gamma": res.gamma, "lb": res.lb, "ub": res.ub,
                     "nodes": res.nodes, "sequence": _one_based(res.best)})
        return 0
    opts = bench.PipelineOptions(engine=args.engine, max_secs=args.max_secs, tabu_secs=args.tabu_secs,
                                 tabu_iters=args.max_iters, formulation=args.formulation,
                                 backend=_backend(args))
    rep = bench.pipeline(spec, opts)
    _emit(args, bench.report_row(rep))
    return 0


def _backend(args):
    if getattr(args, "backend_cmd", None):
        return CommandBackend(args.backend_cmd)
    return default_backend() or ScipyBackend(args.max_secs)


def _lb_and_m(args, inst):
    if args.m is not None and args.lbfix is not None:
        return args.lbfix, args.m
    rng = make_rng(args.seed)
    b = initial_bounds(inst, rng)
    limits = TabuLimits(max_iters=args.max_iters, max_time=args.tabu_secs)
    lb = len(improve_loop(inst, b.witness, limits, rng, ub=b.ub))
    return (args.lbfix if args.lbfix is not None else lb), (args.m if args.m is not None else b.ub)


def cmd_emit(args) -> int:
    inst = _spec(args).build()
    lb, m = _lb_and_m(args, inst)
    if args.decide:
        m = lb + 1
    model = build_model(inst, args.formulation, m, lb_fix=lb or None)
    text = emit_lp(model, relax=args.relax)
    if args.out:
        Path(args.out).write_text(text)
        print(f"wrote {args.out}: {len(model.all_rows())} rows, {model.n_vars} variables", file=sys.stderr)
    else:
        sys.stdout.write(text)
    return 0


def cmd_cutloop(args) -> int:
    inst = _spec(args).build()
    lb, m = _lb_and_m(args, inst)
    sched = CutSchedule(root_rounds=args.rounds)
    if args.cuts:
        kinds = {c.strip() for c in args.cuts.split(",")}
        sched = CutSchedule(root_rounds=args.rounds, type1="t1" in kinds, type2="t2" in kinds)
    model = build_model(inst, args.formulation, m)
    model, stats = cutting_plane_root(model, _backend(args), sched, lb=lb)
    _emit(args, {"m": m, "lb": lb, "rounds": stats.rounds, "solves": stats.solves,
                 "bounds": [round(b, 6) for b in stats.bounds], "cuts_type1": stats.added["I"],
                 "cuts_type2": stats.added["II"], "type1_enabled": stats.type1_enabled,
                 "type2_enabled": stats.type2_enabled})
    return 0


def _parse_grid(ns: str, ps: str):
    return [(int(n), float(p)) for n in ns.split(",") if n for p in ps.split(",") if p]


def cmd_sweep(args) -> int:
    grid = _parse_grid(args.n, args.p)
    seeds = [int(s) for s in args.seeds.split(",")] if args.seeds else [args.seed]
    opts = bench.PipelineOptions(engine=args.engine, max_secs=args.max_secs, tabu_secs=args.tabu_secs,
                                 tabu_iters=args.max_iters, formulation=args.formulation)
    results = bench.sweep(grid, seeds, args.replicates, opts, workers=args.workers)
    text = bench.reports_csv(results, timing=args.timing)
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    if args.summary:
        Path(args.summary).write_text(bench.summary_csv(results, timing=args.timing))
    return 0


def cmd_verify(args) -> int:
    checks = [bench.verify_paths(args.path_n), bench.verify_webs(args.web_n, args.web_samples, args.seed),
              bench.verify_reductions(args.reductions, args.seed)]
    for c in checks:
        state = "PASS" if c.ok else "FAIL"
        print(f"{state} {c.name}: {c.cases} cases, {len(c.mismatches)} mismatches, {c.seconds:.1f} s")
    return 0 if all(c.ok for c in checks) else 1


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--instance", help="web:N,K | kneser:N,R | gnp:N,P[,SEED] | path:N | cycle:N | "
                                           "complement:SRC | DIMACS file")
    common.add_argument("--cset", default="all", help="closed set: all, none or a file of 1-based ids")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--max-secs", type=float, default=None)
    fmt = common.add_mutually_exclusive_group()
    fmt.add_argument("--json", action="store_true")
    fmt.add_argument("--csv", action="store_true")
    common.add_argument("-v", "--verbose", action="store_true")

    ap = argparse.ArgumentParser(prog="grundy", description="General Grundy domination toolkit")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", parents=[common], help="write an instance as DIMACS")
    p.add_argument("--out")
    p.add_argument("--cset-out")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("bounds", parents=[common], help="m1, m3 and a greedy lower bound")
    p.add_argument("--t", type=int, action="append", choices=(1, 2, 3))
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("tabu", parents=[common], help="tabu search for a fixed k or the improvement loop")
    p.add_argument("--k", type=int)
    p.add_argument("--max-iters", type=int, default=50000)
    p.add_argument("--no-altsol", action="store_true")
    p.set_defaults(func=cmd_tabu)

    formulation = argparse.ArgumentParser(add_help=False)
    formulation.add_argument("--formulation", default="F4")
    formulation.add_argument("--max-iters", type=int, default=50000)
    formulation.add_argument("--tabu-secs", type=float, default=30.0)

    p = sub.add_parser("solve", parents=[common, formulation], help="full pipeline with an exact engine")
    p.add_argument("--engine", choices=bench.ENGINES, default="dfs")
    p.add_argument("--skip-heuristics", action="store_true")
    p.add_argument("--backend-cmd")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("emit", parents=[common, formulation], help="write the integer program in LP format")
    p.add_argument("--m", type=int)
    p.add_argument("--lbfix", type=int)
    p.add_argument("--out")
    p.add_argument("--relax", action="store_true")
    p.add_argument("--decide", action="store_true", help="use m = LB + 1 (is there a longer sequence?)")
    p.set_defaults(func=cmd_emit)

    p = sub.add_parser("cutloop", parents=[common, formulation], help="root cutting planes on the LP relaxation")
    p.add_argument("--m", type=int)
    p.add_argument("--lbfix", type=int)
    p.add_argument("--backend-cmd", help="template such as 'python3 -m grundy.lpsolve {lp} {sol}'")
    p.add_argument("--rounds", type=int, default=10)
    p.add_argument("--cuts", help="t1, t2 or t1,t2 (default: edge density rule)")
    p.set_defaults(func=cmd_cutloop)

    p = sub.add_parser("sweep", parents=[common, formulation], help="G(n, p) grid with C = V and C = empty")
    p.add_argument("--n", default="10")
    p.add_argument("--p", default="0.5")
    p.add_argument("--seeds")
    p.add_argument("--replicates", type=int, default=3)
    p.add_argument("--engine", choices=bench.ENGINES, default="dfs")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--timing", action="store_true", help="add wall-time columns (breaks byte-identical reruns)")
    p.add_argument("--out")
    p.add_argument("--summary")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("verify", parents=[common], help="closed forms and reductions against the exact solver")
    p.add_argument("--path-n", type=int, default=9)
    p.add_argument("--web-n", type=int, default=12)
    p.add_argument("--web-samples", type=int, default=200)
    p.add_argument("--reductions", type=int, default=200)
    p.set_defaults(func=cmd_verify)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (GrundyError, OSError) as exc:
        print(f"grundy: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
