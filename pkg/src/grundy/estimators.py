"""Estimator-style front end over the solvers.

``fit`` takes a symmetric 0/1 adjacency matrix (or an :class:`Instance`)
plus the closed set, and stores results in trailing-underscore attributes.
There is nothing to predict or transform, so only ``fit`` is offered.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_array, check_is_fitted

from grundy.exact import solve_exact
from grundy.exceptions import InvalidInstanceError
from grundy.graph import Graph, Instance
from grundy.heuristics import initial_bounds
from grundy.tabu import TabuLimits, improve_loop


def check_adjacency(X) -> np.ndarray:
    """Validate a square, symmetric, loop-free 0/1 matrix."""
    a = check_array(X, dtype=None, ensure_min_samples=1, ensure_min_features=1)
    if a.shape[0] != a.shape[1]:
        raise InvalidInstanceError(f"adjacency matrix must be square, got {a.shape}")
    if not np.isin(a, (0, 1)).all():
        raise InvalidInstanceError("adjacency matrix must be 0/1")
    a = a.astype(np.int8)
    if (a != a.T).any():
        raise InvalidInstanceError("adjacency matrix must be symmetric")
    if np.diag(a).any():
        raise InvalidInstanceError("adjacency matrix must have a zero diagonal")
    return a


def check_instance(X, closed="all") -> Instance:
    if isinstance(X, Instance):
        return X
    a = check_adjacency(X)
    n = a.shape[0]
    edges = [(int(u), int(v)) for u, v in zip(*np.nonzero(np.triu(a)))]
    if isinstance(closed, str):
        if closed not in ("all", "none"):
            raise InvalidInstanceError(f"closed must be 'all', 'none' or vertex ids, got {closed!r}")
        cset = frozenset(range(n)) if closed == "all" else frozenset()
    else:
        cset = frozenset(int(v) for v in closed)
    return Instance(Graph.from_edges(n, edges), cset)


class GrundySolver(BaseEstimator):
    """Exact solver: heuristic bounds, then depth-first search.

    Parameters
    ----------
    max_secs : time limit for the search, None for no limit.
    reduce : remove twins and split components first.
    random_state : seed for the randomized tie-breaking.
    """

    def __init__(self, max_secs=None, reduce=True, random_state=0):
        self.max_secs = max_secs
        self.reduce = reduce
        self.random_state = random_state

    def fit(self, X, y=None, closed="all"):
        inst = check_instance(X, closed)
        b = initial_bounds(inst, self.random_state)
        res = solve_exact(inst, ub_hint=b.ub, lb_hint=b.witness, max_secs=self.max_secs,
                          reduce=self.reduce, rng=self.random_state)
        self.instance_ = inst
        self.initial_bounds_ = (b.lb, b.ub)
        self.sequence_ = res.best
        self.lower_bound_ = res.lb
        self.upper_bound_ = res.ub
        self.gamma_ = res.gamma
        self.status_ = res.status.value
        self.nodes_ = res.nodes
        return self


class TabuGrundy(BaseEstimator):
    """Lower bound from the greedy/tabu pipeline, without proof of optimality."""

    def __init__(self, max_iters=50000, max_time=30.0, altsol=True, random_state=0):
        self.max_iters = max_iters
        self.max_time = max_time
        self.altsol = altsol
        self.random_state = random_state

    def fit(self, X, y=None, closed="all"):
        inst = check_instance(X, closed)
        rng = np.random.default_rng(self.random_state)
        b = initial_bounds(inst, rng)
        limits = TabuLimits(max_iters=self.max_iters, max_time=self.max_time)
        best = improve_loop(inst, b.witness, limits, rng, ub=b.ub, altsol=self.altsol)
        self.instance_ = inst
        self.sequence_ = best
        self.lower_bound_ = len(best)
        self.upper_bound_ = b.ub
        return self

    def score(self, X=None, y=None):
        check_is_fitted(self, "lower_bound_")
        return float(self.lower_bound_)
