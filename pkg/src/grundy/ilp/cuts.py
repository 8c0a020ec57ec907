"""The general ladder/column inequality, its Type I and II subfamilies, and separation."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

import numpy as np

from grundy.exceptions import HypothesisViolatedError, TooLargeError
from grundy.graph import Instance, bits
from grundy.heuristics import precede_masks
from grundy.ilp.model import Assignment, Model, Row

TYPE1_THRESHOLD = 1.1
TYPE2_THRESHOLD = 2.2
INT_TOL = 1e-6


@dataclass(frozen=True)
class Cut:
    kind: str  # "I", "II" or "general"
    params: tuple
    row: Row

    @property
    def key(self) -> tuple:
        return (self.kind, self.params)


def _layers(inst: Instance, U) -> list[int]:
    """``out[q]`` is the mask of vertices with exactly ``q`` neighbours in ``U``."""
    umask = 0
    for u in U:
        umask |= 1 << u
    out = [0] * (len(U) + 1)
    for v in range(inst.n):
        out[(inst.nb[v] & umask).bit_count()] |= 1 << v
    return out


def general_coefficients(inst: Instance, m: int, i: int, k: int, U, N, W, js) -> dict:
    """Validate the hypotheses and return ``{column: coefficient}`` (rhs is ``len(U)``).

    Columns follow the layout of :class:`Model`; a throwaway model of
    ``m`` slots is not needed because the layout only depends on ``n``.
    """
    n = inst.n
    U, N, W, js = tuple(U), tuple(N), tuple(W), tuple(js)
    if not 2 <= i <= m:
        raise HypothesisViolatedError(f"i must lie in 2..{m}, got {i}")
    if not 1 <= k <= i:
        raise HypothesisViolatedError(f"k must lie in 1..i, got {k}")
    if not U or len(set(U)) != len(U):
        raise HypothesisViolatedError("U must be a non-empty set")
    if not W or len(set(W)) != len(W):
        raise HypothesisViolatedError("W must be a non-empty set")
    if len(set(N)) != len(N):
        raise HypothesisViolatedError("N must be a set")
    for v in U + N + W:
        if not 0 <= v < n:
            raise HypothesisViolatedError(f"vertex {v} out of range")
    p, t = len(U), len(W)
    layers = _layers(inst, U)
    top = layers[p]
    if any(not top >> v & 1 for v in N):
        raise HypothesisViolatedError("N is not contained in N^p<U>")
    if any(not top >> w & 1 or w in N for w in W):
        raise HypothesisViolatedError("H1: W is not contained in N^p<U> minus N")
    nb = inst.nb
    for r in range(t - 1):
        if nb[W[r + 1]] & ~nb[W[r]]:
            raise HypothesisViolatedError(f"H2: N<{W[r + 1]}> is not inside N<{W[r]}>")
    for v in N:
        if nb[v] & ~nb[W[-1]]:
            raise HypothesisViolatedError(f"H3: N<{v}> is not inside N<{W[-1]}>")
    if len(js) != t + 1 or js[0] != 1 or js[-1] != i:
        raise HypothesisViolatedError("j-list must have t+1 entries with j_1 = 1 and j_{t+1} = i")
    if any(a > b for a, b in zip(js, js[1:])):
        raise HypothesisViolatedError("j-list must be non-decreasing")

    def y(v, s):
        return v * m + s - 1

    def x(v, s):
        return n * m + v * m + s - 1

    coef: dict = {}

    def add(col, c):
        coef[col] = coef.get(col, 0) + c

    for u in U:
        add(x(u, i), 1)
    for v in N:
        add(y(v, i), 1)
    for r in range(t):
        for j in range(js[r], js[r + 1] + 1):
            add(y(W[r], j), 1)
    if p > 1:
        for v in bits(top):
            add(y(v, k), p - 1)
    for q in range(1, p):
        for v in bits(layers[q]):
            add(y(v, k), q)
    return coef


def make_general_cut(inst: Instance, m: int, i: int, k: int, U, N, W, js) -> Cut:
    coef = general_coefficients(inst, m, i, k, U, N, W, js)
    params = (i, k, tuple(U), tuple(N), tuple(W), tuple(js))
    parts = [str(i), str(k)] + ["-".join(str(v + 1) for v in grp) for grp in (U, N, W)] + ["-".join(map(str, js))]
    name = "gen_" + "_".join(p or "0" for p in parts)
    return Cut("general", params, Row(name, "cut", tuple(sorted(coef.items())), "<=", len(U)))


def make_type1(inst: Instance, m: int, u: int, w: int, i: int) -> Cut:
    """``x[u][i] + sum_{j<=i} y[w][j] <= 1``; needs ``w`` in ``N<u>``."""
    if not inst.nb[u] >> w & 1:
        raise HypothesisViolatedError(f"vertex {w} is not in N<{u}>")
    coef = general_coefficients(inst, m, i, i, (u,), (), (w,), (1, i))
    return Cut("I", (u, w, i), Row(f"cut1_{u + 1}_{w + 1}_{i}", "cut", tuple(sorted(coef.items())), "<=", 1))


def make_type2(inst: Instance, m: int, u1: int, u2: int, w: int, i: int, k: int) -> Cut:
    """Type I for two vertices plus the ``y[.][k]`` column over vertices seeing ``u1`` or ``u2``."""
    if u1 == u2:
        raise HypothesisViolatedError("u1 and u2 must differ")
    if not (inst.nb[u1] >> w & 1 and inst.nb[u2] >> w & 1):
        raise HypothesisViolatedError(f"vertex {w} is not in N<{u1}> and N<{u2}>")
    a, b = sorted((u1, u2))
    coef = general_coefficients(inst, m, i, k, (a, b), (), (w,), (1, i))
    name = f"cut2_{a + 1}_{b + 1}_{w + 1}_{i}_{k}"
    return Cut("II", (a, b, w, i, k), Row(name, "cut", tuple(sorted(coef.items())), "<=", 2))


def cut_lhs(cut: Cut, a: Assignment):
    vec = a.vector().tolist()
    return sum(c * _frac(vec[col]) for col, c in cut.row.terms)


def _frac(v):
    return v if isinstance(v, (int, Fraction)) else Fraction(v)


# ---------------------------------------------------------------- validity


def _legal_arrays(inst: Instance, m: int):
    """Yield ``(slots, first_hit)`` for every slot array of a legal sequence.

    ``slots[i]`` is the vertex in slot ``i + 1`` or -1; ``first_hit[u]`` is
    the slot footprinting ``u`` (``m + 1`` when never).
    """
    nb, n = inst.nb, inst.n
    slots = [-1] * m
    hit = [m + 1] * n

    def rec(s, covered, used):
        if s == m:
            yield tuple(slots), tuple(hit)
            return
        yield from rec(s + 1, covered, used)
        for v in range(n):
            if used >> v & 1:
                continue
            fresh = nb[v] & ~covered
            if not fresh:
                continue
            slots[s] = v
            for u in bits(fresh):
                hit[u] = s + 1
            yield from rec(s + 1, covered | nb[v], used | 1 << v)
            for u in bits(fresh):
                hit[u] = m + 1
            slots[s] = -1

    yield from rec(0, 0, 0)


class F1Points:
    """Every integer point of F1 with ``m`` slots, as rows of an int matrix.

    ``x`` valuations: each vertex ``u`` leaves availability at some slot
    ``d_u <= first_hit[u]``; a non-empty slot ``i >= 2`` additionally needs a
    vertex of its neighbourhood with ``d_u = i``.  With ``canonical_x`` only
    ``d_u = first_hit[u]`` is produced, which maximizes any inequality whose
    ``x`` coefficients are non-negative.
    """

    def __init__(self, inst: Instance, m: int, canonical_x: bool = True, n_max: int = 7):
        if inst.n > n_max:
            raise TooLargeError(f"enumeration limited to n <= {n_max}, got {inst.n}")
        self.inst, self.m, self.canonical_x = inst, m, canonical_x
        self.points = np.array(list(self._generate()), dtype=np.int8).reshape(-1, 2 * inst.n * m)

    def _generate(self):
        n, m, nb = self.inst.n, self.m, self.inst.nb
        for slots, hit in _legal_arrays(self.inst, m):
            y = [0] * (n * m)
            for s, v in enumerate(slots):
                if v >= 0:
                    y[v * m + s] = 1
            choices = [[hit[u]] if self.canonical_x else list(range(1, hit[u] + 1)) for u in range(n)]
            for ds in _product(choices):
                if not self.canonical_x and not _witnessed(slots, ds, nb):
                    continue
                x = [0] * (n * m)
                for u, d in enumerate(ds):
                    for s in range(1, min(d, m + 1)):
                        x[u * m + s - 1] = 1
                yield y + x


def _product(choices):
    if not choices:
        yield ()
        return
    for head in choices[0]:
        for tail in _product(choices[1:]):
            yield (head,) + tail


def _witnessed(slots, ds, nb) -> bool:
    for s, v in enumerate(slots):
        if v < 0 or s == 0:
            continue
        if not any(ds[u] == s + 1 for u in bits(nb[v])):
            return False
    return True


def check_cut_validity(inst: Instance, cut: Cut, m: int, n_max: int = 7, points: F1Points | None = None) -> bool:
    """Whether ``cut`` holds at every integer point of F1 with ``m`` slots."""
    need_full = any(c < 0 for _, c in cut.row.terms)
    if points is None or points.m != m or (need_full and points.canonical_x):
        points = F1Points(inst, m, canonical_x=not need_full, n_max=n_max)
    vec = np.zeros(points.points.shape[1], dtype=np.int64)
    for col, c in cut.row.terms:
        vec[col] = c
    lhs = points.points.astype(np.int64) @ vec
    return bool(np.all(lhs <= cut.row.rhs))


# -------------------------------------------------------------- separation


def _is_frac(v) -> bool:
    return abs(v - round(v)) > INT_TOL


class Separator:
    """Type I and II separation with the candidate sets built once per instance."""

    def __init__(self, model: Model):
        self.model = model
        inst = model.instance
        self.inst = inst
        nb = inst.nb
        after = precede_masks(inst)
        self.w1 = []
        for u in range(inst.n):
            nu = nb[u]
            cand = []
            for w in bits(nu):
                if nb[w].bit_count() < 2:
                    continue
                others = nu & ~(1 << w)
                # w before v and v before w both legal for every other v in N<u>
                if others & ~after[w] or any(not after[v] >> w & 1 for v in bits(others)):
                    continue
                cand.append(w)
            self.w1.append(tuple(cand))
        self.w2 = {}
        for u1, u2 in combinations(range(inst.n), 2):
            both = set(self.w1[u1]) & set(self.w1[u2])
            if not both:
                continue
            only1 = bits(nb[u1] & ~nb[u2])
            only2 = bits(nb[u2] & ~nb[u1])
            keep = []
            for w in sorted(both):
                ok1 = any(nb[w] & ~(1 << u2 | nb[z]) for z in only1)
                ok2 = any(nb[w] & ~(1 << u1 | nb[z]) for z in only2)
                if ok1 and ok2:
                    keep.append(w)
            if keep:
                self.w2[(u1, u2)] = tuple(keep)
        self.union_cols = {}

    def _union(self, u1: int, u2: int) -> tuple:
        key = (u1, u2)
        if key not in self.union_cols:
            nb = self.inst.nb
            both = 1 << u1 | 1 << u2
            self.union_cols[key] = tuple(v for v in range(self.inst.n) if nb[v] & both)
        return self.union_cols[key]

    def type1(self, a: Assignment, pool: set) -> list[Cut]:
        m = self.model.m
        y, x = a.y, a.x
        out = []
        for u in range(self.inst.n):
            for w in self.w1[u]:
                if w not in pool:
                    continue
                s = y[w][0]
                for i in range(2, m + 1):
                    s += y[w][i - 1]
                    if x[u][i - 1] + s > TYPE1_THRESHOLD:
                        out.append(make_type1(self.inst, m, u, w, i))
                        pool.discard(w)
                        break
        return out

    def type2(self, a: Assignment, pool: set) -> list[Cut]:
        m = self.model.m
        y, x = a.y, a.x
        out = []
        for (u1, u2), ws in self.w2.items():
            cols = self._union(u1, u2)
            for w in ws:
                if w not in pool:
                    continue
                s = y[w][0]
                found = False
                for i in range(2, m + 1):
                    s += y[w][i - 1]
                    x1, x2 = x[u1][i - 1], x[u2][i - 1]
                    if not (_is_frac(x1) and _is_frac(x2)):
                        continue
                    for k in range(1, i + 1):
                        if not _is_frac(y[w][k - 1]):
                            continue
                        col = sum(y[v][k - 1] for v in cols)
                        if x1 + x2 + s + col > TYPE2_THRESHOLD:
                            out.append(make_type2(self.inst, m, u1, u2, w, i, k))
                            pool.discard(w)
                            found = True
                            break
                    if found:
                        break
        return out
