"""End-to-end pipeline, random-graph sweeps and oracle checks."""

from __future__ import annotations

import csv
import io
import logging
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, fields

import numpy as np

from grundy.closed_form import gamma_path, gamma_web, m1_bound
from grundy.exact import Status, brute_gamma, solve_exact
from grundy.exceptions import BadParametersError, InvalidInstanceError
from grundy.graph import Graph, Instance, components, twin_reduce
from grundy.heuristics import initial_bounds
from grundy.ilp.backends import ScipyBackend, default_backend
from grundy.ilp.cutloop import CutSchedule, cutting_plane_root
from grundy.ilp.model import build_model
from grundy.instance_io import InstanceSpec, gen_gnp, gen_path, gen_web, make_rng
from grundy.tabu import TabuLimits, improve_loop

logger = logging.getLogger(__name__)

ENGINES = ("none", "dfs", "milp", "cutloop")


@dataclass
class PipelineOptions:
    engine: str = "dfs"
    max_secs: float | None = None  # engine budget
    tabu_secs: float = 30.0
    tabu_iters: int = 50000
    altsol: bool = True
    formulation: int = 4
    rounds: int = 10
    cut_types: tuple | None = None  # None: density rule
    backend: object = None

    def __post_init__(self):
        if self.engine not in ENGINES:
            raise BadParametersError(f"engine must be one of {ENGINES}, got {self.engine!r}")


@dataclass
class RunReport:
    instance: str
    n: int
    density: float
    cset: str
    lb_initial: int
    ub_initial: int
    lb_final: int
    ub_final: int
    status: str
    engine: str
    seed: int
    time: float
    nodes: int = 0
    cuts_type1: int = 0
    cuts_type2: int = 0
    sequence: tuple = field(default=(), repr=False)

    @property
    def relgap(self) -> float:
        return 100.0 * (self.ub_final - self.lb_final) / self.lb_final if self.lb_final else math.inf


def _cset_mode(inst: Instance) -> str:
    if len(inst.closed) == inst.n:
        return "V"
    if not inst.closed:
        return "empty"
    return "mixed"


def pipeline(spec: InstanceSpec | Instance, options: PipelineOptions = PipelineOptions(), *,
             name: str | None = None, seed: int = 0) -> RunReport:
    """Bounds, tabu improvement, then the chosen engine."""
    start = time.monotonic()
    if isinstance(spec, InstanceSpec):
        inst = spec.build()
        name = name or spec.name
        seed = spec.seed
    else:
        inst = spec
        name = name or f"n{inst.n}"
    rng = make_rng(seed)

    b = initial_bounds(inst, rng)
    ub0 = min(b.ub, m1_bound(inst))
    lb0 = b.lb
    limits = TabuLimits(max_iters=options.tabu_iters, max_time=options.tabu_secs)
    best = improve_loop(inst, b.witness, limits, rng, ub=ub0, altsol=options.altsol)
    lb, ub = len(best), ub0
    nodes = cuts1 = cuts2 = 0
    status = Status.OPTIMAL.value if lb >= ub else "open"

    if lb < ub and options.engine == "dfs":
        res = solve_exact(inst, ub_hint=ub, lb_hint=best, max_secs=options.max_secs, rng=rng)
        nodes = res.nodes
        best = res.best
        lb, ub = res.lb, min(ub, res.ub)
        status = res.status.value
    elif lb < ub and options.engine == "milp":
        backend = options.backend or default_backend() or ScipyBackend(options.max_secs)
        model = build_model(inst, options.formulation, ub, lb_fix=lb)
        res = backend.solve(model, relax=False)
        got = int(round(res.objective))
        lb, ub = max(lb, got), max(lb, got)
        status = Status.OPTIMAL.value
    elif lb < ub and options.engine == "cutloop":
        backend = options.backend or default_backend() or ScipyBackend(options.max_secs)
        sched = CutSchedule(root_rounds=options.rounds)
        if options.cut_types is not None:
            sched = CutSchedule(root_rounds=options.rounds, type1="t1" in options.cut_types,
                                type2="t2" in options.cut_types)
        model = build_model(inst, options.formulation, ub)
        _, stats = cutting_plane_root(model, backend, sched, lb=lb)
        cuts1, cuts2 = stats.added["I"], stats.added["II"]
        ub = max(lb, min(ub, math.floor(stats.bounds[-1] + 1e-6)))
        status = Status.OPTIMAL.value if lb >= ub else "open"

    return RunReport(
        instance=name, n=inst.n, density=round(inst.graph.density(), 4), cset=_cset_mode(inst),
        lb_initial=lb0, ub_initial=ub0, lb_final=lb, ub_final=ub, status=status,
        engine=options.engine, seed=seed, time=round(time.monotonic() - start, 3),
        nodes=nodes, cuts_type1=cuts1, cuts_type2=cuts2, sequence=tuple(best),
    )


# ------------------------------------------------------------------ sweeps

CSV_FIELDS = ["instance", "n", "p", "replicate", "cset", "seed", "engine", "density",
              "lb_initial", "ub_initial", "lb_final", "ub_final", "status", "relgap",
              "nodes", "cuts_type1", "cuts_type2"]
SUMMARY_FIELDS = ["n", "p", "runs", "solved", "relgap", "time"]


def cell_graph(n: int, p: float, replicate: int, seed: int):
    """Deterministic G(n, p) for a sweep cell, redrawn until no vertex is isolated."""
    for attempt in range(1000):
        ss = np.random.SeedSequence([seed, n, int(round(p * 10**6)), replicate, attempt])
        g = gen_gnp(n, p, int(ss.generate_state(1)[0]))
        if all(g.adj[v] for v in range(n)):
            return g, attempt
    raise InvalidInstanceError(f"cannot draw G({n}, {p}) without isolated vertices")


def _run_cell(job):
    n, p, rep, seed, cmode, options = job
    g, _ = cell_graph(n, p, rep, seed)
    inst = Instance(g, frozenset(range(n)) if cmode == "V" else frozenset())
    name = f"gnp_{n}_{p:g}_{rep + 1}"
    return (n, p, rep), pipeline(inst, options, name=name, seed=seed)


def sweep(grid, seeds=(0,), replicates: int = 3, options: PipelineOptions = PipelineOptions(),
          workers: int = 1) -> list[tuple]:
    """One run per (cell, replicate, seed, C in {V, empty}); returns ``[(cell, report)]``."""
    jobs = [(int(n), float(p), rep, int(s), cmode, options)
            for n, p in grid for s in seeds for rep in range(replicates) for cmode in ("V", "empty")]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            return list(ex.map(_run_cell, jobs))
    return [_run_cell(j) for j in jobs]


def reports_csv(results, timing: bool = False) -> str:
    cols = CSV_FIELDS + (["time"] if timing else [])
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=cols, lineterminator="\n")
    w.writeheader()
    for (n, p, rep), r in results:
        row = {k: v for k, v in asdict(r).items() if k in cols}
        row.update(n=n, p=f"{p:g}", replicate=rep + 1, relgap=f"{r.relgap:.2f}")
        w.writerow(row)
    return buf.getvalue()


def summary_csv(results, timing: bool = False) -> str:
    cols = SUMMARY_FIELDS if timing else SUMMARY_FIELDS[:-1]
    groups: dict = {}
    for (n, p, _), r in results:
        groups.setdefault((n, p), []).append(r)
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=cols, lineterminator="\n")
    w.writeheader()
    for (n, p), rs in groups.items():
        open_gaps = [r.relgap for r in rs if r.status != Status.OPTIMAL.value]
        row = {"n": n, "p": f"{p:g}", "runs": len(rs),
               "solved": sum(r.status == Status.OPTIMAL.value for r in rs),
               "relgap": f"{np.mean(open_gaps):.2f}" if open_gaps else "-"}
        if timing:
            row["time"] = f"{np.mean([r.time for r in rs]):.2f}"
        w.writerow(row)
    return buf.getvalue()


def report_row(r: RunReport) -> dict:
    d = {f.name: getattr(r, f.name) for f in fields(r) if f.name != "sequence"}
    d["relgap"] = r.relgap
    d["sequence"] = [v + 1 for v in r.sequence]
    return d


# ------------------------------------------------------------ oracle suites


@dataclass
class CheckResult:
    name: str
    cases: int
    mismatches: list
    seconds: float

    @property
    def ok(self) -> bool:
        return not self.mismatches


def verify_paths(n_max: int = 9) -> CheckResult:
    """Closed form against the exact solver for every valid closed set of P_n, n <= n_max."""
    start = time.monotonic()
    cases, bad = 0, []
    for n in range(1, n_max + 1):
        g = gen_path(n)
        for mask in range(1 << n):
            closed = frozenset(v for v in range(n) if mask >> v & 1)
            try:
                inst = Instance(g, closed)
            except InvalidInstanceError:
                continue
            cases += 1
            got, want = solve_exact(inst).gamma, gamma_path(n, closed)
            if got != want:
                bad.append((n, sorted(closed), got, want))
    return CheckResult("paths", cases, bad, time.monotonic() - start)


def verify_webs(n_max: int = 12, samples: int = 200, seed: int = 0) -> CheckResult:
    """Closed form against the exact solver on random closed sets of every web with n <= n_max."""
    start = time.monotonic()
    rng = make_rng(seed)
    cases, bad = 0, []
    for n in range(4, n_max + 1):
        for k in range(1, (n - 2) // 2 + 1):
            g = gen_web(n, k)
            for _ in range(samples):
                closed = frozenset(int(v) for v in np.flatnonzero(rng.random(n) < 0.5))
                cases += 1
                got, want = solve_exact(Instance(g, closed)).gamma, gamma_web(n, k, closed)
                if got != want:
                    bad.append((n, k, sorted(closed), got, want))
    return CheckResult("webs", cases, bad, time.monotonic() - start)


def planted_instance(rng, n_max: int = 8) -> Instance:
    """Random instance with copied vertices (twins) and, often, several components."""
    while True:
        n = int(rng.integers(2, n_max + 1))
        base = int(rng.integers(1, n + 1))
        edges = set()
        for u in range(base):
            for v in range(u + 1, base):
                if rng.random() < 0.4:
                    edges.add((u, v))
        closed = {v for v in range(base) if rng.random() < 0.5}
        for v in range(base, n):
            src = int(rng.integers(0, v))
            if rng.random() < 0.3:
                continue  # leave v as a fresh component seed
            # open twin: same open neighbourhood; closed twin: adjacent with the same closed one
            nbrs = {b if a == src else a for a, b in edges if src in (a, b)}
            if src not in closed and nbrs and rng.random() < 0.5:
                edges |= {tuple(sorted((v, u))) for u in nbrs}
            else:
                edges |= {tuple(sorted((v, u))) for u in nbrs | {src}}
                closed |= {v, src}
        for v in range(n):
            if not any(v in e for e in edges):
                closed.add(v)
        try:
            return Instance(Graph.from_edges(n, sorted(edges)), frozenset(closed))
        except InvalidInstanceError:
            continue


def verify_reductions(cases: int = 200, seed: int = 0, n_max: int = 8) -> CheckResult:
    """Reduced and split instances keep the brute-force value."""
    start = time.monotonic()
    rng = make_rng(seed)
    bad = []
    for _ in range(cases):
        inst = planted_instance(rng, n_max)
        want = brute_gamma(inst, n_max=n_max)
        reduced, _ = twin_reduce(inst)
        via_parts = sum(brute_gamma(part, n_max=n_max) for part in components(reduced))
        got = solve_exact(inst).gamma
        if not want == via_parts == got:
            bad.append((inst, want, via_parts, got))
    return CheckResult("reductions", cases, bad, time.monotonic() - start)
