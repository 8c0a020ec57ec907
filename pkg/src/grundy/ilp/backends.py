"""LP/MILP backends.

:class:`CommandBackend` writes an LP file, runs a user-supplied command
template with ``{lp}`` and ``{sol}`` substituted, and reads the solution
file back.  :class:`ScipyBackend` solves in-process with HiGHS.  The module
``grundy.lpsolve`` is a ready-made command for the template.
"""

from __future__ import annotations

import os
import shlex
import subprocess
import tempfile
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy import sparse
from scipy.optimize import Bounds, LinearConstraint, milp

from grundy.exceptions import BackendError, BackendTimeoutError
from grundy.ilp.lpfile import LPProblem, emit_lp, parse_solution
from grundy.ilp.model import Assignment, Model

ENV_VAR = "GRUNDY_BACKEND_CMD"


@dataclass
class LPResult:
    objective: float
    assignment: Assignment
    relaxed: bool


def solve_arrays(c, a, lo, hi, integral: bool, time_limit: float | None = None):
    """Maximize ``c z`` over ``lo <= A z <= hi``, ``0 <= z <= 1`` with HiGHS."""
    n = len(c)
    cons = [LinearConstraint(a, lo, hi)] if a.shape[0] else []
    opts = {} if time_limit is None else {"time_limit": time_limit}
    res = milp(-np.asarray(c, dtype=float), constraints=cons,
               integrality=np.ones(n) if integral else np.zeros(n),
               bounds=Bounds(0, 1), options=opts)
    if res.x is None:
        raise BackendError(f"HiGHS returned no solution: {res.message}")
    if integral and res.status == 1:
        raise BackendTimeoutError(f"HiGHS hit the time limit: {res.message}")
    return res.x, -res.fun


class ScipyBackend:
    name = "scipy"

    def __init__(self, time_limit: float | None = None):
        self.time_limit = time_limit

    def solve(self, model: Model, relax: bool = True) -> LPResult:
        a, lo, hi = model.matrix()
        z, obj = solve_arrays(model.objective(), a, lo, hi, not relax, self.time_limit)
        if not relax:
            z = np.round(z)
            obj = z[: model.n * model.m].sum()
        z = np.clip(z, 0.0, 1.0)
        return LPResult(float(obj), Assignment.from_vector(z, model.n, model.m), relax)


class CommandBackend:
    """Run ``template`` (e.g. ``"mysolver {lp} {sol}"``) on an emitted LP file."""

    name = "command"

    def __init__(self, template: str, timeout: float | None = None):
        if "{lp}" not in template or "{sol}" not in template:
            raise BackendError("backend template needs both {lp} and {sol} placeholders")
        self.template = template
        self.timeout = timeout

    def solve(self, model: Model, relax: bool = True) -> LPResult:
        with tempfile.TemporaryDirectory(prefix="grundy-") as tmp:
            lp = Path(tmp) / "model.lp"
            sol = Path(tmp) / "model.sol"
            lp.write_text(emit_lp(model, relax=relax))
            argv = [part.format(lp=str(lp), sol=str(sol)) for part in shlex.split(self.template)]
            try:
                proc = subprocess.run(argv, capture_output=True, text=True, timeout=self.timeout)
            except subprocess.TimeoutExpired:
                raise BackendTimeoutError(f"backend exceeded {self.timeout} s") from None
            except OSError as exc:
                raise BackendError(f"cannot run backend: {exc}") from None
            if proc.returncode != 0:
                raise BackendError(f"backend exited with {proc.returncode}: {proc.stderr.strip()[:500]}")
            if not sol.exists():
                raise BackendError("backend wrote no solution file")
            a = parse_solution(sol.read_text(), model)
        obj = float(a.y.sum())
        return LPResult(obj, a, relax)


def default_backend():
    """Backend named by the environment, or None."""
    cmd = os.environ.get(ENV_VAR)
    return CommandBackend(cmd) if cmd else None


def lp_problem_arrays(prob: LPProblem):
    """``(c, A, lo, hi, integral_mask)`` for a parsed LP, columns in ``prob.names`` order."""
    idx = {v: k for k, v in enumerate(prob.names)}
    n = len(prob.names)
    c = np.zeros(n)
    for v, w in prob.objective.items():
        c[idx[v]] = w
    if prob.sense == "min":
        c = -c
    data, ri, ci = [], [], []
    lo = np.full(len(prob.rows), -np.inf)
    hi = np.full(len(prob.rows), np.inf)
    for r, (_, coefs, sense, rhs) in enumerate(prob.rows):
        for v, w in coefs.items():
            ri.append(r)
            ci.append(idx[v])
            data.append(w)
        if sense in ("<=", "="):
            hi[r] = rhs
        if sense in (">=", "="):
            lo[r] = rhs
    a = sparse.csr_matrix((data, (ri, ci)), shape=(len(prob.rows), n))
    integral = np.array([v in prob.binaries for v in prob.names])
    return c, a, lo, hi, integral
