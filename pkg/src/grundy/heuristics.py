"""Greedy maximalization and the ``delta_t`` / ``m_t`` upper bounds."""

from __future__ import annotations

from dataclasses import dataclass

from grundy.exceptions import NoLegalPrefixError, NotLegalError
from grundy.graph import Instance, bits, check_sequence, covered_mask, is_legal
from grundy.instance_io import make_rng


def precede_masks(inst: Instance) -> list[int]:
    """``out[a]`` has bit ``b`` set iff ``(a, b)`` is a legal pair."""
    nb = inst.nb
    out = []
    for a in range(inst.n):
        na = nb[a]
        m = 0
        for b in range(inst.n):
            if nb[b] & ~na:
                m |= 1 << b
        out.append(m)
    return out


def maximalize(inst: Instance, seed_seq=(), rng=None) -> tuple:
    """Greedily extend a legal sequence until no vertex can be appended.

    Each step appends a candidate footprinting the fewest new vertices;
    ties are broken by adding a fresh uniform draw in [0, 1) per candidate.
    """
    seq = check_sequence(inst, seed_seq)
    if not is_legal(inst, seq):
        raise NotLegalError(f"seed sequence {seq} is not legal")
    rng = make_rng(rng)
    nb = inst.nb
    full = inst.full
    covered = covered_mask(inst, seq)
    out = list(seq)
    while covered != full:
        unc = ~covered
        cands = []
        scores = []
        for v in range(inst.n):
            f = (nb[v] & unc).bit_count()
            if f:
                cands.append(v)
                scores.append(f)
        beta = rng.random(len(cands))
        best = min(range(len(cands)), key=lambda i: scores[i] + beta[i])
        v = cands[best]
        out.append(v)
        covered |= nb[v]
    return tuple(out)


def delta_t(inst: Instance, t: int) -> int:
    """Least number of vertices covered by a legal sequence of length ``t`` (t <= 3)."""
    if t not in (1, 2, 3):
        raise ValueError("t must be 1, 2 or 3")
    nb = inst.nb
    if t == 1:
        if inst.n == 0:
            raise NoLegalPrefixError("empty instance")
        return min(m.bit_count() for m in nb)
    prec = precede_masks(inst)
    best = None
    for v1 in range(inst.n):
        for v2 in bits(prec[v1]):
            w12 = nb[v1] | nb[v2]
            if t == 2:
                c = w12.bit_count()
                if best is None or c < best:
                    best = c
                continue
            base = w12.bit_count()
            if best is not None and base + 1 >= best:
                continue
            for v3 in bits(prec[v1] & prec[v2]):
                if nb[v3] & ~w12:
                    c = (w12 | nb[v3]).bit_count()
                    if best is None or c < best:
                        best = c
    if best is None:
        raise NoLegalPrefixError(f"no legal sequence of length {t}")
    return best


def m_t(inst: Instance, t: int) -> int:
    return inst.n - delta_t(inst, t) + t


@dataclass(frozen=True)
class Bounds:
    lb: int
    witness: tuple
    ub: int
    delta_t: int
    t: int

    @property
    def gap(self) -> int:
        return self.ub - self.lb


def _small_gamma(inst: Instance) -> Bounds:
    """Exact answer when no legal triple exists, i.e. gamma <= 2."""
    nb = inst.nb
    for v1 in range(inst.n):
        for v2 in range(inst.n):
            if v1 != v2 and nb[v2] & ~nb[v1]:
                return Bounds(2, (v1, v2), 2, inst.n, 2)
    return Bounds(1, (0,), 1, inst.n, 1)


def initial_bounds(inst: Instance, rng=None) -> Bounds:
    """``m_3`` together with a maximal legal sequence.

    Every legal triple is scanned; each time the minimum cover ``delta_3``
    improves, that triple is maximalized and the longest result is kept.
    """
    rng = make_rng(rng)
    nb = inst.nb
    n = inst.n
    prec = precede_masks(inst)
    delta3 = n + 1
    best: tuple = ()
    for v1 in range(n):
        for v2 in bits(prec[v1]):
            w12 = nb[v1] | nb[v2]
            if w12.bit_count() + 1 >= delta3:
                continue
            for v3 in bits(prec[v1] & prec[v2]):
                if not nb[v3] & ~w12:
                    continue
                size = (w12 | nb[v3]).bit_count()
                if size < delta3:
                    delta3 = size
                    cand = maximalize(inst, (v1, v2, v3), rng)
                    if len(cand) > len(best):
                        best = cand
    if not best:
        return _small_gamma(inst)
    return Bounds(len(best), best, n - delta3 + 3, delta3, 3)
