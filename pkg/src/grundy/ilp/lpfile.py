"""LP-format writer and reader, and the plain ``name value`` solution format."""

from __future__ import annotations

import re
from dataclasses import dataclass, field

import numpy as np

from grundy.exceptions import ParseError
from grundy.ilp.model import Assignment, Model

LINE_WIDTH = 78
BOUND_TOL = 1e-6


def _wrap(head: str, tokens: list[str]) -> list[str]:
    lines = []
    cur = head
    for tok in tokens:
        if len(cur) + 1 + len(tok) > LINE_WIDTH and cur.strip():
            lines.append(cur)
            cur = "   "
        cur = f"{cur} {tok}" if cur.strip() else cur + tok
    lines.append(cur)
    return lines


def _terms(model: Model, terms) -> list[str]:
    out = []
    for k, (col, c) in enumerate(sorted(terms)):
        sign = "-" if c < 0 else "+"
        mag = abs(c)
        tok = model.var_name(col) if mag == 1 else f"{mag} {model.var_name(col)}"
        if k == 0:
            out.append(tok if c > 0 else f"- {tok}")
        else:
            out.append(f"{sign} {tok}")
    return out


def emit_lp(model: Model, relax: bool = False) -> str:
    """The model in LP format; ``relax`` drops the Binaries section."""
    names = model.var_names()
    lines = [f"\\ GGDP F{model.formulation} n={model.n} m={model.m} lb_fix={model.lb_fix}", "Maximize"]
    obj = [f"+ {nm}" if k else nm for k, nm in enumerate(names[: model.n * model.m])]
    lines += _wrap(" obj:", obj)
    lines.append("Subject To")
    for row in model.all_rows():
        toks = _terms(model, row.terms) or ["0 y_1_1"]
        toks += [row.sense, str(row.rhs)]
        lines += _wrap(f" {row.name}:", toks)
    lines.append("Bounds")
    for nm in names:
        lines.append(f" 0 <= {nm} <= 1")
    if not relax:
        lines.append("Binaries")
        lines += _wrap(" ", names)
    lines.append("End")
    return "\n".join(lines) + "\n"


# --------------------------------------------------------------- solutions


def format_solution(values: dict) -> str:
    return "".join(f"{k} {v:.10g}\n" for k, v in values.items())


def parse_solution(text: str, model: Model) -> Assignment:
    """Read ``name value`` lines; unknown names and bad numbers raise ParseError.

    Values within 1e-6 outside [0, 1] are clamped; names not listed read as 0.
    Lines starting with ``#`` and an optional ``objective`` line are skipped.
    """
    vec = np.zeros(model.n_vars, dtype=float)
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 2:
            raise ParseError(f"expected 'name value', got {raw!r}", lineno)
        name, val = parts
        try:
            num = float(val)
        except ValueError:
            raise ParseError(f"bad number {val!r}", lineno) from None
        if name.lower() in ("objective", "obj"):
            continue
        try:
            col = model.col_of(name)
        except (KeyError, ValueError):
            raise ParseError(f"unknown variable {name!r}", lineno) from None
        if -BOUND_TOL <= num < 0:
            num = 0.0
        elif 1 < num <= 1 + BOUND_TOL:
            num = 1.0
        elif not 0 <= num <= 1:
            raise ParseError(f"value {num} of {name} outside [0, 1]", lineno)
        vec[col] = num
    return Assignment.from_vector(vec, model.n, model.m)


# ----------------------------------------------------------- LP subset reader


@dataclass
class LPProblem:
    """A parsed LP file: maximize ``c z`` subject to ``lo <= A z <= hi``."""

    names: list
    objective: dict
    sense: str
    rows: list = field(default_factory=list)  # (name, {var: coef}, sense, rhs)
    bounds: dict = field(default_factory=dict)
    binaries: set = field(default_factory=set)


_TERM = re.compile(r"([+-])?\s*(\d+(?:\.\d*)?(?:[eE][+-]?\d+)?)?\s*([A-Za-z_][\w.]*)")
_SECTIONS = {
    "maximize": "obj", "maximum": "obj", "max": "obj",
    "minimize": "obj", "minimum": "obj", "min": "obj",
    "subject to": "st", "such that": "st", "st": "st", "s.t.": "st",
    "bounds": "bounds", "binaries": "bin", "binary": "bin", "bin": "bin",
    "general": "gen", "generals": "gen", "end": "end",
}


def _parse_expr(expr: str, lineno: int) -> dict:
    out: dict = {}
    pos = 0
    expr = expr.strip()
    while pos < len(expr):
        if expr[pos].isspace():
            pos += 1
            continue
        mt = _TERM.match(expr, pos)
        if not mt or mt.end() == pos:
            raise ParseError(f"cannot read term at {expr[pos:]!r}", lineno)
        sign, num, var = mt.groups()
        c = float(num) if num else 1.0
        if sign == "-":
            c = -c
        out[var] = out.get(var, 0.0) + c
        pos = mt.end()
    return out


def parse_lp(text: str) -> LPProblem:
    """Read the LP-format subset produced by :func:`emit_lp`."""
    section = None
    prob = LPProblem([], {}, "max")
    seen: dict = {}
    stmt, stmt_line = "", 0

    def note(var):
        if var not in seen:
            seen[var] = len(prob.names)
            prob.names.append(var)

    def flush():
        nonlocal stmt
        body = stmt.strip()
        stmt = ""
        if not body:
            return
        if section == "obj":
            if ":" in body:
                body = body.split(":", 1)[1]
            prob.objective = _parse_expr(body, stmt_line)
            for v in prob.objective:
                note(v)
        elif section == "st":
            name = f"r{len(prob.rows) + 1}"
            if ":" in body:
                name, body = (s.strip() for s in body.split(":", 1))
            mt = re.search(r"(<=|>=|=<|=>|=|<|>)", body)
            if not mt:
                raise ParseError(f"constraint {name} has no sense", stmt_line)
            lhs, rhs = body[: mt.start()], body[mt.end():]
            try:
                rv = float(rhs)
            except ValueError:
                raise ParseError(f"bad right-hand side {rhs.strip()!r}", stmt_line) from None
            sense = {"<": "<=", "=<": "<=", ">": ">=", "=>": ">="}.get(mt.group(1), mt.group(1))
            coefs = _parse_expr(lhs, stmt_line)
            for v in coefs:
                note(v)
            prob.rows.append((name, coefs, sense, rv))

    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("\\", 1)[0].strip()
        if not line:
            continue
        key = line.lower()
        if key in _SECTIONS:
            flush()
            section = _SECTIONS[key]
            if key.startswith("min"):
                prob.sense = "min"
            continue
        if section is None:
            raise ParseError(f"content before any section: {line!r}", lineno)
        if section == "end":
            raise ParseError("content after End", lineno)
        if section in ("obj", "st"):
            # a new statement starts with "name:" or follows a completed one
            starts_new = re.match(r"^[A-Za-z_][\w.]*\s*:", line) is not None
            if starts_new:
                flush()
                stmt_line = lineno
            elif not stmt:
                stmt_line = lineno
            stmt += " " + line
        elif section == "bounds":
            mt = re.fullmatch(r"(\S+)\s*<=\s*([A-Za-z_][\w.]*)\s*<=\s*(\S+)", line)
            if not mt:
                raise ParseError(f"unsupported bound {line!r}", lineno)
            try:
                lo, hi = float(mt.group(1)), float(mt.group(3))
            except ValueError:
                raise ParseError(f"bad bound {line!r}", lineno) from None
            note(mt.group(2))
            prob.bounds[mt.group(2)] = (lo, hi)
        elif section in ("bin", "gen"):
            for v in line.split():
                note(v)
                prob.binaries.add(v)
    flush()
    return prob
