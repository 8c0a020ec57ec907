"""Slot-array integer programs for the GGDP.

A sequence is embedded in ``m`` slots.  ``y[v][i] = 1`` puts vertex ``v`` in
slot ``i`` and ``x[u][i] = 1`` keeps ``u`` available (not yet footprinted)
after slot ``i``.  ``x[u][0]`` is the constant 1 and never a variable.

Constraint families, keyed by the short names used in row names:

========  =====================================================
slot      at most one vertex per slot
once      every vertex used at most once
chain     availability only shrinks
keep      availability only shrinks through footprinting
remove    a footprinted vertex stops being available
legal     a vertex in slot i footprints something
canon     no non-empty slot after an empty one
dom       every vertex gets footprinted
fix       the first ``lb_fix`` slots are non-empty
========  =====================================================
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from fractions import Fraction

import numpy as np
from scipy import sparse

from grundy.exceptions import BadParametersError, DimensionMismatchError, NotLegalError, TooLongError
from grundy.graph import Instance, bits, check_sequence, is_legal

FORMULATIONS = {
    # id: (keep, canon, dom)
    1: (False, False, False),
    2: (True, False, False),
    3: (False, True, False),
    4: (True, True, False),
    5: (False, False, True),
    6: (True, False, True),
    7: (False, True, True),
    8: (True, True, True),
}


def parse_formulation(f) -> int:
    if isinstance(f, str):
        f = f.strip().upper().lstrip("F")
    f = int(f)
    if f not in FORMULATIONS:
        raise BadParametersError(f"formulation must be F1..F8, got {f}")
    return f


@dataclass(frozen=True)
class Row:
    name: str
    family: str
    terms: tuple  # ((column, integer coefficient), ...)
    sense: str  # "<=", ">=" or "="
    rhs: int


@dataclass
class Assignment:
    """Values of ``y`` and ``x`` as ``(n, m)`` arrays; slot ``i`` is column ``i - 1``."""

    y: np.ndarray
    x: np.ndarray

    def vector(self) -> np.ndarray:
        return np.concatenate([self.y.ravel(), self.x.ravel()])

    @classmethod
    def from_vector(cls, vec, n: int, m: int) -> "Assignment":
        vec = np.asarray(vec)
        if vec.shape != (2 * n * m,):
            raise DimensionMismatchError(f"expected {2 * n * m} values, got {vec.shape}")
        return cls(vec[: n * m].reshape(n, m).copy(), vec[n * m:].reshape(n, m).copy())

    def is_integral(self, tol: float = 0.0) -> bool:
        v = self.vector()
        return all(abs(a - round(a)) <= tol for a in v)


@dataclass
class Model:
    instance: Instance
    formulation: int
    m: int
    lb_fix: int | None
    rows: list
    cuts: list = field(default_factory=list)

    @property
    def n(self) -> int:
        return self.instance.n

    @property
    def n_vars(self) -> int:
        return 2 * self.n * self.m

    def ycol(self, v: int, i: int) -> int:
        return v * self.m + (i - 1)

    def xcol(self, v: int, i: int) -> int:
        return self.n * self.m + v * self.m + (i - 1)

    def var_name(self, col: int) -> str:
        block, rest = divmod(col, self.n * self.m)
        v, i = divmod(rest, self.m)
        return f"{'yx'[block]}_{v + 1}_{i + 1}"

    def var_names(self) -> list[str]:
        return [self.var_name(c) for c in range(self.n_vars)]

    def col_of(self, name: str) -> int:
        kind, v, i = name.split("_")
        v, i = int(v), int(i)
        if not (1 <= v <= self.n and 1 <= i <= self.m) or kind not in ("y", "x"):
            raise KeyError(name)
        return self.ycol(v - 1, i) if kind == "y" else self.xcol(v - 1, i)

    def objective(self) -> np.ndarray:
        c = np.zeros(self.n_vars, dtype=np.int64)
        c[: self.n * self.m] = 1
        return c

    def all_rows(self) -> list:
        return self.rows + [c.row for c in self.cuts]

    def add_cut(self, cut) -> bool:
        """Append ``cut`` unless one with the same parameters is present."""
        if any(c.key == cut.key for c in self.cuts):
            return False
        self.cuts.append(cut)
        return True

    def family_counts(self) -> dict:
        out: dict = {}
        for r in self.all_rows():
            out[r.family] = out.get(r.family, 0) + 1
        return out

    def matrix(self):
        """``(A, lower, upper)`` with every row written as ``lower <= A z <= upper``."""
        rows = self.all_rows()
        data, ri, ci = [], [], []
        lo = np.full(len(rows), -np.inf)
        hi = np.full(len(rows), np.inf)
        for r, row in enumerate(rows):
            for col, coef in row.terms:
                ri.append(r)
                ci.append(col)
                data.append(coef)
            if row.sense in ("<=", "="):
                hi[r] = row.rhs
            if row.sense in (">=", "="):
                lo[r] = row.rhs
        a = sparse.csr_matrix((data, (ri, ci)), shape=(len(rows), self.n_vars), dtype=np.int64)
        return a, lo, hi

    def with_lb_fix(self, lb_fix: int | None) -> "Model":
        fresh = build_model(self.instance, self.formulation, self.m, lb_fix)
        return replace(fresh, cuts=list(self.cuts))


def build_model(inst: Instance, formulation=4, m: int | None = None, lb_fix: int | None = None) -> Model:
    """Materialize formulation F1..F8 with ``m`` slots.

    With ``lb_fix`` the first ``lb_fix`` slots are forced non-empty, and the
    ``slot`` rows for those slots and ``canon`` rows for slots 2..lb_fix are
    left out because the equalities imply them.
    """
    f = parse_formulation(formulation)
    if m is None or m < 1:
        raise BadParametersError(f"m must be a positive slot count, got {m}")
    if lb_fix is not None and not 0 <= lb_fix <= m:
        raise BadParametersError(f"lb_fix must lie in 0..m, got {lb_fix}")
    keep, canon, dom = FORMULATIONS[f]
    lb = lb_fix or 0
    n = inst.n
    nbs = [bits(mask) for mask in inst.nb]
    model = Model(inst, f, m, lb_fix, [])
    y, x = model.ycol, model.xcol
    rows = model.rows

    for i in range(1, m + 1):
        if i <= lb:
            continue
        if canon and i > 1:
            continue
        rows.append(Row(f"slot_{i}", "slot", tuple((y(v, i), 1) for v in range(n)), "<=", 1))
    for v in range(n):
        rows.append(Row(f"once_{v + 1}", "once", tuple((y(v, i), 1) for i in range(1, m + 1)), "<=", 1))
    for u in range(n):
        for i in range(2, m + 1):
            rows.append(Row(f"chain_{u + 1}_{i}", "chain", ((x(u, i), 1), (x(u, i - 1), -1)), "<=", 0))
    if keep:
        for u in range(n):
            for i in range(1, m + 1):
                terms = [(y(v, i), 1) for v in nbs[u]] + [(x(u, i), 1)]
                if i == 1:
                    rows.append(Row(f"keep_{u + 1}_{i}", "keep", tuple(terms), ">=", 1))
                else:
                    terms.append((x(u, i - 1), -1))
                    rows.append(Row(f"keep_{u + 1}_{i}", "keep", tuple(terms), ">=", 0))
    for u in range(n):
        for i in range(1, m + 1):
            terms = ((x(u, i), 1),) + tuple((y(v, i), 1) for v in nbs[u])
            rows.append(Row(f"remove_{u + 1}_{i}", "remove", terms, "<=", 1))
    for v in range(n):
        for i in range(2, m + 1):
            terms = [(y(v, i), 1)]
            for u in nbs[v]:
                terms.append((x(u, i - 1), -1))
                terms.append((x(u, i), 1))
            rows.append(Row(f"legal_{v + 1}_{i}", "legal", tuple(terms), "<=", 0))
    if canon:
        for i in range(max(2, lb + 1), m + 1):
            terms = tuple((y(v, i), 1) for v in range(n)) + tuple((y(v, i - 1), -1) for v in range(n))
            rows.append(Row(f"canon_{i}", "canon", terms, "<=", 0))
    if dom:
        for u in range(n):
            terms = tuple((y(v, i), 1) for i in range(1, m + 1) for v in nbs[u])
            rows.append(Row(f"dom_{u + 1}", "dom", terms, ">=", 1))
    for i in range(1, lb + 1):
        rows.append(Row(f"fix_{i}", "fix", tuple((y(v, i), 1) for v in range(n)), "=", 1))
    return model


def point_from_sequence(model: Model, seq) -> Assignment:
    """Canonical embedding: sequence left-justified, ``x`` marks vertices still available."""
    inst = model.instance
    seq = check_sequence(inst, seq)
    if not is_legal(inst, seq):
        raise NotLegalError(f"sequence {seq} is not legal")
    if len(seq) > model.m:
        raise TooLongError(f"sequence of length {len(seq)} does not fit in {model.m} slots")
    n, m = model.n, model.m
    y = np.zeros((n, m), dtype=np.int64)
    x = np.zeros((n, m), dtype=np.int64)
    covered = 0
    for i in range(1, m + 1):
        if i <= len(seq):
            v = seq[i - 1]
            y[v, i - 1] = 1
            covered |= inst.nb[v]
        for u in range(n):
            if not covered >> u & 1:
                x[u, i - 1] = 1
    return Assignment(y, x)


@dataclass(frozen=True)
class Violation:
    row: str
    lhs: object
    sense: str
    rhs: int


def _holds(lhs, sense, rhs) -> bool:
    if sense == "<=":
        return lhs <= rhs
    if sense == ">=":
        return lhs >= rhs
    return lhs == rhs


def check_feasible(model: Model, a: Assignment) -> list[Violation]:
    """Every violated row (bounds included), evaluated in exact arithmetic."""
    shape = (model.n, model.m)
    if np.shape(a.y) != shape or np.shape(a.x) != shape:
        raise DimensionMismatchError(f"assignment shape does not match model {shape}")
    vec = [_exact(v) for v in a.vector().tolist()]
    out = []
    for col, val in enumerate(vec):
        if val < 0 or val > 1:
            out.append(Violation(f"bound_{model.var_name(col)}", val, "in", 0))
    for row in model.all_rows():
        lhs = sum(coef * vec[col] for col, coef in row.terms)
        if not _holds(lhs, row.sense, row.rhs):
            out.append(Violation(row.name, lhs, row.sense, row.rhs))
    return out


def _exact(v):
    if isinstance(v, (int, Fraction)):
        return v
    if isinstance(v, float):
        return int(v) if v.is_integer() else Fraction(v)
    return Fraction(v)


def feasible_mask(model: Model, points: np.ndarray) -> np.ndarray:
    """Vectorized feasibility of integer points (one per row of ``points``)."""
    points = np.asarray(points, dtype=np.int64)
    if points.ndim != 2 or points.shape[1] != model.n_vars:
        raise DimensionMismatchError(f"points must have {model.n_vars} columns")
    a, lo, hi = model.matrix()
    lhs = (a @ points.T).T
    ok = np.all((points >= 0) & (points <= 1), axis=1)
    ok &= np.all(lhs <= hi, axis=1) & np.all(lhs >= lo, axis=1)
    return ok
