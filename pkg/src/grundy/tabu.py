"""Tabu search over fixed-length vertex sequences.

A state is a sequence of ``k`` distinct vertices, not necessarily legal.
Its cost is the number of conflicting positions (empty footprint).  Moves
either swap a sequence vertex for an outside vertex or swap two positions;
the vertex moved out of place becomes tabu for a random tenure.
"""

from __future__ import annotations

import logging
import time
from dataclasses import dataclass, field

import numpy as np

from grundy.exceptions import AllMovesForbiddenError, BadParametersError
from grundy.graph import Instance, check_sequence, is_legal
from grundy.heuristics import maximalize, precede_masks
from grundy.instance_io import make_rng

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class TabuLimits:
    max_iters: int = 50000
    max_time: float = 30.0
    tenure_range: tuple = (5, 20)
    alt_sizes: tuple = (2, 3, 4)

    def __post_init__(self):
        lo, hi = self.tenure_range
        if lo < 1 or hi < lo:
            raise BadParametersError(f"bad tenure range {self.tenure_range}")


class _Beta:
    """Uniform [0, 1) tie-breakers drawn from the search rng in blocks."""

    def __init__(self, rng, block=4096):
        self.rng = rng
        self.block = block
        self.buf = rng.random(block)
        self.pos = 0

    def __call__(self) -> float:
        if self.pos == self.block:
            self.buf = self.rng.random(self.block)
            self.pos = 0
        b = self.buf[self.pos]
        self.pos += 1
        return float(b)


@dataclass
class TabuState:
    current: list
    k: int
    rng: np.random.Generator
    tabu_list: dict = field(default_factory=dict)
    iter: int = 0
    best_conflicts: int | None = None
    last_move: tuple | None = None


def conflict_sets(inst: Instance, seq) -> tuple[tuple, tuple]:
    """0-based conflicting positions and the earlier positions they clash with."""
    seq = check_sequence(inst, seq)
    return _conflict_sets(inst.nb, seq)


def _conflict_sets(nb, seq) -> tuple[tuple, tuple]:
    covered = 0
    conflicting = []
    for i, v in enumerate(seq):
        if not nb[v] & ~covered:
            conflicting.append(i)
        covered |= nb[v]
    if not conflicting:
        return (), ()
    clash = set()
    for i in conflicting:
        ni = nb[seq[i]]
        for j in range(i):
            if nb[seq[j]] & ni:
                clash.add(j)
    return tuple(conflicting), tuple(sorted(clash))


class _Evaluator:
    """Prefix covers and prefix conflict counts of the current sequence."""

    def __init__(self, nb, seq):
        self.nb = nb
        self.seq = seq
        k = len(seq)
        self.cover = [0] * (k + 1)
        self.conf = [0] * (k + 1)
        c = 0
        bad = 0
        for i, v in enumerate(seq):
            if not nb[v] & ~c:
                bad += 1
            c |= nb[v]
            self.cover[i + 1] = c
            self.conf[i + 1] = bad

    def replace_cost(self, l: int, z: int, cap: int) -> int:
        """Conflicts after putting ``z`` at position ``l``; stops early above ``cap``."""
        nb, seq = self.nb, self.seq
        c = self.cover[l]
        bad = self.conf[l]
        if not nb[z] & ~c:
            bad += 1
        c |= nb[z]
        for j in range(l + 1, len(seq)):
            m = nb[seq[j]]
            if not m & ~c:
                bad += 1
                if bad > cap:
                    return bad
            c |= m
        return bad

    def swap_cost(self, l1: int, l2: int, cap: int) -> int:
        nb, seq = self.nb, self.seq
        c = self.cover[l1]
        bad = self.conf[l1]
        for j in range(l1, len(seq)):
            v = seq[l2] if j == l1 else seq[l1] if j == l2 else seq[j]
            m = nb[v]
            if not m & ~c:
                bad += 1
                if bad > cap:
                    return bad
            c |= m
        return bad


def initial_state(inst: Instance, k: int, rng=None) -> TabuState:
    if not 1 <= k <= inst.n:
        raise BadParametersError(f"k must lie in 1..{inst.n}, got {k}")
    rng = make_rng(rng)
    current = [int(v) for v in rng.choice(inst.n, size=k, replace=False)]
    return TabuState(current=current, k=k, rng=rng)


def tabu_step(inst: Instance, state: TabuState, limits: TabuLimits = TabuLimits(), *,
              relations=None, beta=None, conflicts=None):
    """Apply the best allowed move to ``state`` (in place) and return it.

    Raises :class:`AllMovesForbiddenError` when the tabu list blocks every
    move.
    """
    nb = inst.nb
    seq = state.current
    if relations is None:
        relations = legal_pair_relations(inst)
    after, before = relations
    if beta is None:
        beta = _Beta(state.rng)
    if conflicts is None:
        conflicts = _conflict_sets(nb, seq)
    conf_set, clash_set = conflicts
    conf_lookup = set(conf_set)
    clash_lookup = set(clash_set)
    positions = sorted(conf_lookup | clash_lookup)
    ev = _Evaluator(nb, seq)
    in_seq = 0
    for v in seq:
        in_seq |= 1 << v
    tabu_mask = 0
    for v in state.tabu_list:
        tabu_mask |= 1 << v
    outside = inst.full & ~in_seq & ~tabu_mask

    worst = inst.n + 1
    best_score = float(worst)
    best_move = None
    for l in positions:
        vl = seq[l]
        allowed = outside
        if l in conf_lookup:
            allowed &= after[vl]
        if l in clash_lookup:
            allowed &= before[vl]
        while allowed:
            low = allowed & -allowed
            z = low.bit_length() - 1
            allowed ^= low
            cost = ev.replace_cost(l, z, int(best_score))
            score = cost + beta()
            if score < best_score:
                best_score = score
                best_move = ("swap-out", l, z)
    for l2 in positions:
        if l2 == 0:
            continue
        v2 = seq[l2]
        for l1 in range(l2):
            v1 = seq[l1]
            if not after[v2] >> v1 & 1 or v1 in state.tabu_list:
                continue
            cost = ev.swap_cost(l1, l2, int(best_score))
            score = cost + beta()
            if score < best_score:
                best_score = score
                best_move = ("swap-in", l1, l2)
    if best_move is None:
        raise AllMovesForbiddenError("every move is forbidden by the tabu list")

    for v in list(state.tabu_list):
        state.tabu_list[v] -= 1
        if state.tabu_list[v] == 0:
            del state.tabu_list[v]
    kind, a, b = best_move
    if kind == "swap-out":
        leaving = seq[a]
        seq[a] = b
    else:
        leaving = seq[b]
        seq[a], seq[b] = seq[b], seq[a]
    lo, hi = limits.tenure_range
    state.tabu_list[leaving] = int(state.rng.integers(lo, hi + 1))
    state.iter += 1
    state.best_conflicts = int(best_score)
    state.last_move = best_move
    return state


def legal_pair_relations(inst: Instance) -> tuple[list, list]:
    """``(after, before)``: ``after[a]`` has bit b iff (a, b) is legal; ``before`` is its transpose."""
    after = precede_masks(inst)
    before = [0] * inst.n
    for a, m in enumerate(after):
        while m:
            low = m & -m
            before[low.bit_length() - 1] |= 1 << a
            m ^= low
    return after, before


def gen_alternative(inst: Instance, state: TabuState, alt_sizes=(2, 3, 4), conflicting=None):
    """Maximalize random order-preserving subsequences of non-conflicting vertices.

    Returns the first result of length at least ``k``, or None.  Nothing is
    tried unless at least ``len(alt_sizes) + 1`` positions are non-conflicting.
    """
    seq = state.current
    if conflicting is None:
        conflicting, _ = _conflict_sets(inst.nb, seq)
    if state.k - len(conflicting) < len(alt_sizes) + 1:
        return None
    bad = set(conflicting)
    good = [i for i in range(len(seq)) if i not in bad]
    for r in alt_sizes:
        if r > len(good):
            continue
        picked = sorted(state.rng.choice(len(good), size=r, replace=False).tolist())
        sub = tuple(seq[good[i]] for i in picked)
        cand = maximalize(inst, sub, state.rng)
        if len(cand) >= state.k:
            return cand
    return None


@dataclass
class TabuOutcome:
    sequence: tuple | None
    status: str  # "success", "limit" or "forbidden"
    iterations: int
    elapsed: float
    trace: list = field(default_factory=list)


def run_tabu(inst: Instance, k: int, limits: TabuLimits = TabuLimits(), rng=None, *,
             altsol: bool = True, record_trace: bool = False, deadline=None) -> TabuOutcome:
    """Search for a legal sequence of length ``k``; maximalize it on success."""
    start = time.monotonic()
    stop = start + limits.max_time
    if deadline is not None:
        stop = min(stop, deadline)
    state = initial_state(inst, k, rng)
    relations = legal_pair_relations(inst)
    beta = _Beta(state.rng)
    trace = []
    nb = inst.nb
    while state.iter < limits.max_iters and time.monotonic() < stop:
        conflicting, clash = _conflict_sets(nb, state.current)
        if record_trace:
            trace.append((state.iter, len(conflicting), tuple(state.current)))
        if logger.isEnabledFor(logging.DEBUG):
            logger.debug("iter %d conflicts %d", state.iter, len(conflicting))
        if not conflicting:
            seq = maximalize(inst, tuple(state.current), state.rng)
            return TabuOutcome(seq, "success", state.iter, time.monotonic() - start, trace)
        if altsol:
            alt = gen_alternative(inst, state, limits.alt_sizes, conflicting)
            if alt is not None:
                return TabuOutcome(alt, "success", state.iter, time.monotonic() - start, trace)
        try:
            tabu_step(inst, state, limits, relations=relations, beta=beta, conflicts=(conflicting, clash))
        except AllMovesForbiddenError:
            return TabuOutcome(None, "forbidden", state.iter, time.monotonic() - start, trace)
    return TabuOutcome(None, "limit", state.iter, time.monotonic() - start, trace)


def tabu_search(inst: Instance, k: int, limits: TabuLimits = TabuLimits(), rng=None, *, altsol: bool = True):
    """Maximal legal sequence of length >= ``k``, or None when the search fails."""
    return run_tabu(inst, k, limits, rng, altsol=altsol).sequence


def improve_loop(inst: Instance, initial, limits: TabuLimits = TabuLimits(), rng=None, *,
                 ub: int | None = None, altsol: bool = True) -> tuple:
    """Raise the target length by one after every successful search.

    ``limits.max_time`` bounds the whole loop; ``limits.max_iters`` applies
    to each search.  Stops at ``ub`` when given.
    """
    rng = make_rng(rng)
    best = check_sequence(inst, initial)
    if not is_legal(inst, best):
        raise ValueError("initial sequence must be legal")
    best = maximalize(inst, best, rng)
    deadline = time.monotonic() + limits.max_time
    cap = inst.n if ub is None else min(ub, inst.n)
    while len(best) < cap and time.monotonic() < deadline:
        out = run_tabu(inst, len(best) + 1, limits, rng, altsol=altsol, deadline=deadline)
        if out.sequence is None:
            break
        logger.info("tabu reached length %d after %d iterations", len(out.sequence), out.iterations)
        best = out.sequence
    return best
