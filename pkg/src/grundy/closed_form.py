"""Exact values for paths and webs, and the single-vertex bound ``m_1``.

Paths use 0-based vertices ``0..n-1`` in path order; webs use their native
labels ``0..n-1``.
"""

from __future__ import annotations

from functools import lru_cache

from grundy.exceptions import BadParametersError, InvalidInstanceError
from grundy.graph import Graph, Instance, bits
from grundy.instance_io import gen_web


def is_gconf(n: int, cset) -> bool:
    """Whether ``cset`` is a good configuration for the path on ``n`` vertices.

    Isolated vertices outside the set are allowed here, unlike in a GGDP
    instance.  Memoised on sub-intervals of the path, so linear in ``n``.
    """
    if n < 1:
        raise BadParametersError("path length must be at least 1")
    closed = frozenset(cset)

    @lru_cache(maxsize=None)
    def gconf(a: int, b: int) -> bool:
        length = b - a + 1
        if length == 1:
            return a in closed
        if length == 2:
            return not (a in closed and b in closed)
        return (a not in closed and gconf(a + 2, b)) or (b not in closed and gconf(a, b - 2))

    return gconf(0, n - 1)


def gamma_path(n: int, cset) -> int:
    """General Grundy domination number of ``P_n``: ``n`` on a gconf, else ``n - 1``."""
    closed = frozenset(cset)
    if n == 1 and 0 not in closed:
        raise InvalidInstanceError("P_1 with an empty closed set is not a valid instance")
    return n if is_gconf(n, closed) else n - 1


def _induced_path_order(g: Graph, vertices: list[int]) -> list[int] | None:
    """Vertices of ``g[vertices]`` in path order, or None when it is not a path."""
    vs = set(vertices)
    if len(vertices) == 1:
        return list(vertices)
    deg = {v: [u for u in g.adj[v] if u in vs] for v in vertices}
    n_edges = sum(len(a) for a in deg.values()) // 2
    if n_edges != len(vertices) - 1 or any(len(a) > 2 for a in deg.values()):
        return None
    ends = [v for v in vertices if len(deg[v]) == 1]
    if len(ends) != 2:
        return None
    order = [ends[0]]
    prev = None
    while len(order) < len(vertices):
        cur = order[-1]
        nxt = [u for u in deg[cur] if u != prev]
        if not nxt:
            return None
        prev = cur
        order.append(nxt[0])
    return order


def gamma_web(n: int, k: int, cset) -> int:
    """General Grundy domination number of the web ``W_n^k``.

    ``m_1`` is attained when C = V, or when some vertex ``i`` outside C leaves
    ``V - N[i]`` inducing a path on which C is a gconf.  Every ``i`` outside
    C is tried and the induced structure is checked on the actual graph.
    """
    g = gen_web(n, k)
    closed = frozenset(cset)
    if len(closed) == n:
        return n - 2 * k
    m1 = n - 2 * k + 1
    for i in range(n):
        if i in closed:
            continue
        rest = bits(((1 << n) - 1) & ~(g.masks[i] | 1 << i))
        order = _induced_path_order(g, rest)
        if order is None:
            continue
        local = {pos for pos, v in enumerate(order) if v in closed}
        if is_gconf(len(order), local):
            return m1
    return m1 - 1


def m1_bound(inst: Instance) -> int:
    """``n - min_v |N<v>| + 1``."""
    return inst.n - min(nb.bit_count() for nb in inst.nb) + 1
