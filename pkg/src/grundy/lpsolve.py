"""Solve an LP file with HiGHS and write ``name value`` lines.

Usage: ``python -m grundy.lpsolve MODEL.lp SOLUTION.sol``.  Every variable
is bounded to [0, 1]; variables listed under Binaries are integral.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np
from scipy.optimize import Bounds, LinearConstraint, milp

from grundy.ilp.backends import lp_problem_arrays
from grundy.ilp.lpfile import format_solution, parse_lp


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(prog="python -m grundy.lpsolve")
    ap.add_argument("lp")
    ap.add_argument("sol")
    ap.add_argument("--time-limit", type=float)
    args = ap.parse_args(argv)
    prob = parse_lp(Path(args.lp).read_text())
    c, a, lo, hi, integral = lp_problem_arrays(prob)
    lb = np.array([prob.bounds.get(v, (0.0, 1.0))[0] for v in prob.names])
    ub = np.array([prob.bounds.get(v, (0.0, 1.0))[1] for v in prob.names])
    opts = {} if args.time_limit is None else {"time_limit": args.time_limit}
    cons = [LinearConstraint(a, lo, hi)] if a.shape[0] else []
    res = milp(-c, constraints=cons, integrality=integral.astype(int), bounds=Bounds(lb, ub), options=opts)
    if res.x is None:
        print(f"no solution: {res.message}", file=sys.stderr)
        return 1
    z = np.where(integral, np.round(res.x), res.x)
    values = {"objective": float(c @ z)}
    values.update({v: float(z[k]) for k, v in enumerate(prob.names) if abs(z[k]) > 1e-12})
    Path(args.sol).write_text(format_solution(values))
    return 0


if __name__ == "__main__":
    sys.exit(main())
