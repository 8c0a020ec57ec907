"""Root-node cutting planes with Type I and II separation."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

from grundy.ilp.cuts import Separator
from grundy.ilp.model import Model

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class CutSchedule:
    """When to separate.

    ``tree_rounds`` maps node depth to rounds inside a branch-and-cut tree
    and ``type2_max_depth`` limits Type II there.  File-based backends have
    no tree callbacks, so both are recorded but only the root runs.
    """

    root_rounds: int = 10
    type1_density: float = 0.6
    type2_density: float = 0.4
    type1: bool | None = None  # None: decide from density
    type2: bool | None = None
    tree_rounds: tuple = ((1, 2), (2, 2)) + tuple((d, 1) for d in range(3, 11))
    type2_max_depth: int = 5

    def enabled(self, density: float) -> tuple[bool, bool]:
        t1 = density < self.type1_density if self.type1 is None else self.type1
        t2 = density < self.type2_density if self.type2 is None else self.type2
        return t1, t2


@dataclass
class CutStats:
    bounds: list = field(default_factory=list)
    added: dict = field(default_factory=lambda: {"I": 0, "II": 0})
    rounds: int = 0
    solves: int = 0
    type1_enabled: bool = False
    type2_enabled: bool = False


def cutting_plane_root(model: Model, backend, schedule: CutSchedule = CutSchedule(), lb: int | None = None):
    """Alternate LP solves and separation; returns ``(model, stats)``.

    With ``lb`` and no equalities yet, the model is first rebuilt with the
    first ``lb`` slots forced non-empty.  The model returned carries every
    cut added.  ``stats.bounds`` holds the LP value after each solve.
    """
    if lb is not None and model.lb_fix is None and lb > 0:
        model = model.with_lb_fix(min(lb, model.m))
    stats = CutStats()
    t1, t2 = schedule.enabled(model.instance.graph.density())
    stats.type1_enabled, stats.type2_enabled = t1, t2
    sep = Separator(model) if (t1 or t2) else None

    res = backend.solve(model, relax=True)
    stats.solves += 1
    stats.bounds.append(res.objective)
    while sep is not None and stats.rounds < schedule.root_rounds:
        pool = set(range(model.n))
        found = []
        if t1:
            found += sep.type1(res.assignment, pool)
        if t2:
            found += sep.type2(res.assignment, pool)
        stats.rounds += 1
        new = 0
        for cut in found:
            if model.add_cut(cut):
                stats.added[cut.kind] += 1
                new += 1
        logger.info("round %d: LP %.4f, %d new cuts", stats.rounds, res.objective, new)
        if not new:
            break
        res = backend.solve(model, relax=True)
        stats.solves += 1
        stats.bounds.append(res.objective)
    return model, stats
