"""Exact general Grundy domination number by depth-first enumeration.

The search extends legal prefixes one vertex at a time and prunes a prefix
of length ``t`` covering ``W`` when ``t + min(n - |W|, #candidates)`` cannot
beat the incumbent.
"""

from __future__ import annotations

import enum
import time
from dataclasses import dataclass

from grundy.closed_form import m1_bound
from grundy.exceptions import NotLegalError, TooLargeError
from grundy.graph import Instance, check_sequence, components, is_legal, twin_reduce
from grundy.heuristics import initial_bounds, maximalize


class Status(str, enum.Enum):
    OPTIMAL = "optimal"
    FEASIBLE = "feasible"
    INFEASIBLE_FOR_BOUND = "infeasible-for-bound"
    TIMED_OUT = "timed-out"


@dataclass
class SolveResult:
    status: Status
    gamma: int | None
    best: tuple
    ub: int
    nodes: int = 0
    elapsed: float = 0.0

    @property
    def lb(self) -> int:
        return len(self.best)


class _Timeout(Exception):
    pass


class _Search:
    def __init__(self, inst: Instance, ub: int, incumbent: tuple, deadline, memo: bool):
        self.nb = inst.nb
        self.n = inst.n
        self.full = inst.full
        self.ub = ub
        self.best = incumbent
        self.best_len = len(incumbent)
        self.deadline = deadline
        self.nodes = 0
        self.seen = {} if memo else None
        self.path: list[int] = []

    def run(self) -> bool:
        """Search; returns False when interrupted by the deadline."""
        if self.best_len >= self.ub:
            return True
        try:
            self._dfs(0)
        except _Timeout:
            return False
        return True

    def _dfs(self, covered: int) -> None:
        self.nodes += 1
        if self.deadline is not None and self.nodes & 1023 == 0 and time.monotonic() > self.deadline:
            raise _Timeout
        t = len(self.path)
        unc = self.full & ~covered
        nb = self.nb
        cands = []
        for v in range(self.n):
            f = (nb[v] & unc).bit_count()
            if f:
                cands.append((f, v))
        if not cands:
            if t > self.best_len:
                self.best = tuple(self.path)
                self.best_len = t
            return
        room = min(unc.bit_count(), len(cands))
        if t + room <= self.best_len:
            return
        if self.seen is not None:
            # the future of a prefix depends on its covered set only
            prev = self.seen.get(covered)
            if prev is not None and prev >= t:
                return
            self.seen[covered] = t
        cands.sort()
        for _, v in cands:
            self.path.append(v)
            self._dfs(covered | nb[v])
            self.path.pop()
            if self.best_len >= self.ub:
                return
            if t + room <= self.best_len:
                return


def _solve_component(inst: Instance, deadline, memo: bool, rng) -> tuple[tuple, bool, int, int]:
    ub = m1_bound(inst)
    incumbent = maximalize(inst, (), rng)
    if ub > len(incumbent):
        b = initial_bounds(inst, rng)
        ub = min(ub, b.ub)
        if len(b.witness) > len(incumbent):
            incumbent = b.witness
    search = _Search(inst, ub, incumbent, deadline, memo)
    finished = search.run()
    return search.best, finished, search.nodes, ub


def solve_exact(
    inst: Instance,
    ub_hint: int | None = None,
    lb_hint=None,
    max_secs: float | None = None,
    *,
    reduce: bool = True,
    memo: bool = False,
    rng=0,
) -> SolveResult:
    """Compute the general Grundy domination number exactly.

    Twins are removed and components are solved separately unless
    ``reduce`` is False.  ``lb_hint`` (a legal sequence) is installed as the
    first incumbent; ``ub_hint`` only tightens the reported bound.  With
    ``memo`` prefixes whose covered set was already reached at the same or
    greater depth are skipped.
    """
    start = time.monotonic()
    deadline = None if max_secs is None else start + max_secs
    hint = ()
    if lb_hint is not None:
        hint = check_sequence(inst, lb_hint)
        if not is_legal(inst, hint):
            raise NotLegalError(f"lb_hint {hint} is not legal")
        hint = maximalize(inst, hint, rng)

    # labels of the parts below compose back to ids of ``base``, i.e. of ``inst``
    base = Instance(inst.graph, inst.closed)
    parts = [base]
    if reduce:
        reduced, _ = twin_reduce(base)
        parts = components(reduced)

    best: list[int] = []
    ub_total = 0
    nodes = 0
    complete = True
    for part in parts:
        seq, finished, cnt, ub = _solve_component(part, deadline, memo, rng)
        best.extend(part.labels[v] for v in seq)
        nodes += cnt
        if finished:
            ub_total += len(seq)
        else:
            complete = False
            ub_total += ub

    best_t = tuple(best)
    if reduce and best_t:
        # the concatenation may miss deleted twins; those never footprint anything new
        best_t = maximalize(inst, best_t, rng)
    if len(hint) > len(best_t):
        best_t = hint
    if ub_hint is not None:
        ub_total = min(ub_total, ub_hint)
    elapsed = time.monotonic() - start
    if complete:
        return SolveResult(Status.OPTIMAL, len(best_t), best_t, len(best_t), nodes, elapsed)
    return SolveResult(Status.TIMED_OUT, None, best_t, max(ub_total, len(best_t)), nodes, elapsed)


def brute_gamma(inst: Instance, n_max: int = 10) -> int:
    """Longest legal sequence by full enumeration, without any pruning."""
    if inst.n > n_max:
        raise TooLargeError(f"brute force limited to n <= {n_max}, got {inst.n}")
    nb = inst.nb

    def longest(covered: int, used: int) -> int:
        best = 0
        for v in range(inst.n):
            if not used >> v & 1 and nb[v] & ~covered:
                best = max(best, 1 + longest(covered | nb[v], used | 1 << v))
        return best

    return longest(0, 0)


def legal_sequences(inst: Instance, max_len: int | None = None):
    """Yield every legal sequence (the empty one included), depth first."""
    nb = inst.nb
    path: list[int] = []

    def rec(covered):
        yield tuple(path)
        if max_len is not None and len(path) >= max_len:
            return
        for v in range(inst.n):
            if nb[v] & ~covered:
                path.append(v)
                yield from rec(covered | nb[v])
                path.pop()

    yield from rec(0)
