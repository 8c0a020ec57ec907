"""Graphs, GGDP instances and legality of vertex sequences.

Vertices are the integers ``0..n-1``.  Neighbourhoods are additionally kept
as Python ``int`` bitmasks (bit ``u`` set iff ``u`` is in the set), which is
what the search code in the other modules works with.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence as SequenceT

from grundy.exceptions import (
    DuplicateEdgeError,
    IndexOutOfRangeError,
    IsolatedOutsideCError,
    NotLegalError,
    SelfLoopError,
)

Sequence = tuple  # ordered tuple of distinct vertex ids


def mask_of(vertices: Iterable[int]) -> int:
    m = 0
    for v in vertices:
        m |= 1 << v
    return m


def bits(mask: int) -> list[int]:
    """Vertex ids whose bit is set in ``mask``, ascending."""
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph with sorted adjacency tuples."""

    n: int
    adj: tuple

    def __post_init__(self):
        if len(self.adj) != self.n:
            raise ValueError("adjacency length does not match n")
        object.__setattr__(self, "_masks", tuple(mask_of(a) for a in self.adj))

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]], *, strict: bool = True) -> "Graph":
        """Build a graph from 0-based edge pairs.

        With ``strict`` (the default) duplicate edges and self-loops raise;
        otherwise duplicates are silently collapsed.
        """
        if n < 0:
            raise ValueError("n must be non-negative")
        nbrs = [set() for _ in range(n)]
        for u, v in edges:
            u, v = int(u), int(v)
            if not (0 <= u < n and 0 <= v < n):
                raise IndexOutOfRangeError(f"edge ({u}, {v}) out of range for n={n}")
            if u == v:
                raise SelfLoopError(f"self-loop at vertex {u}")
            if v in nbrs[u]:
                if strict:
                    raise DuplicateEdgeError(f"duplicate edge ({u}, {v})")
                continue
            nbrs[u].add(v)
            nbrs[v].add(u)
        return cls(n, tuple(tuple(sorted(s)) for s in nbrs))

    @property
    def masks(self) -> tuple:
        return self._masks

    def edges(self) -> list[tuple[int, int]]:
        return [(u, v) for u in range(self.n) for v in self.adj[u] if u < v]

    @property
    def n_edges(self) -> int:
        return sum(len(a) for a in self.adj) // 2

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def density(self) -> float:
        if self.n < 2:
            return 0.0
        return 2.0 * self.n_edges / (self.n * (self.n - 1))

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self._masks[u] >> v & 1)

    def induced(self, vertices: SequenceT[int]) -> "Graph":
        """Subgraph induced by ``vertices``; new id ``i`` is ``vertices[i]``."""
        index = {v: i for i, v in enumerate(vertices)}
        adj = []
        for v in vertices:
            adj.append(tuple(sorted(index[u] for u in self.adj[v] if u in index)))
        return Graph(len(vertices), tuple(adj))


@dataclass(frozen=True)
class Instance:
    """A GGDP instance ``G;C``.

    ``labels[i]`` is the id vertex ``i`` had in the instance this one was
    derived from by reductions or component splitting (identity otherwise).
    """

    graph: Graph
    closed: frozenset
    labels: tuple = field(default=None, compare=False)

    def __post_init__(self):
        g = self.graph
        closed = frozenset(int(v) for v in self.closed)
        for v in closed:
            if not 0 <= v < g.n:
                raise IndexOutOfRangeError(f"closed-set vertex {v} out of range for n={g.n}")
        object.__setattr__(self, "closed", closed)
        for v in range(g.n):
            if v not in closed and not g.adj[v]:
                raise IsolatedOutsideCError(
                    f"vertex {v} is isolated and not in C; the instance is not a valid GGDP instance"
                )
        nb = tuple(g.masks[v] | (1 << v) if v in closed else g.masks[v] for v in range(g.n))
        object.__setattr__(self, "_nb", nb)
        if self.labels is None:
            object.__setattr__(self, "labels", tuple(range(g.n)))

    @property
    def n(self) -> int:
        return self.graph.n

    @property
    def nb(self) -> tuple:
        """Bitmask of N<v> for every vertex."""
        return self._nb

    @property
    def full(self) -> int:
        return (1 << self.graph.n) - 1

    def neighborhood(self, v: int) -> frozenset:
        return neighborhood(self, v)

    def induced(self, vertices: SequenceT[int]) -> "Instance":
        vertices = list(vertices)
        sub = self.graph.induced(vertices)
        index = {v: i for i, v in enumerate(vertices)}
        closed = {index[v] for v in vertices if v in self.closed}
        return Instance(sub, frozenset(closed), tuple(self.labels[v] for v in vertices))

    def to_parent(self, seq: Iterable[int]) -> tuple:
        """Translate a sequence over this instance into parent vertex ids."""
        return tuple(self.labels[v] for v in seq)


def build_instance(n: int, edges: Iterable[tuple[int, int]], closed_set: Iterable[int]) -> Instance:
    """Validated constructor; duplicate edges and self-loops are rejected."""
    return Instance(Graph.from_edges(n, edges, strict=True), frozenset(closed_set))


def neighborhood(inst: Instance, v: int) -> frozenset:
    """N[v] when ``v`` is in the closed set, N(v) otherwise."""
    if not 0 <= v < inst.n:
        raise IndexOutOfRangeError(f"vertex {v} out of range for n={inst.n}")
    return frozenset(bits(inst.nb[v]))


def check_sequence(inst: Instance, seq: Iterable[int]) -> tuple:
    seq = tuple(int(v) for v in seq)
    for v in seq:
        if not 0 <= v < inst.n:
            raise IndexOutOfRangeError(f"vertex {v} out of range for n={inst.n}")
    if len(set(seq)) != len(seq):
        raise ValueError("sequence repeats a vertex")
    return seq


@dataclass(frozen=True)
class LegalityReport:
    legal: bool
    footprints: tuple  # W_1..W_k as frozensets
    conflicting: tuple  # 0-based positions with an empty footprint
    dominated: frozenset
    is_dominating: bool


def footprint_masks(nb: SequenceT[int], seq: SequenceT[int]) -> list[int]:
    covered = 0
    out = []
    for v in seq:
        w = nb[v] & ~covered
        out.append(w)
        covered |= nb[v]
    return out


def evaluate(inst: Instance, seq: Iterable[int]) -> LegalityReport:
    """Footprints of every position, left to right.

    All conflicting positions are reported, not only the first one.
    """
    seq = check_sequence(inst, seq)
    fps = footprint_masks(inst.nb, seq)
    covered = 0
    for w in fps:
        covered |= w
    conflicting = tuple(i for i, w in enumerate(fps) if not w)
    return LegalityReport(
        legal=not conflicting,
        footprints=tuple(frozenset(bits(w)) for w in fps),
        conflicting=conflicting,
        dominated=frozenset(bits(covered)),
        is_dominating=covered == inst.full,
    )


def is_legal(inst: Instance, seq: SequenceT[int]) -> bool:
    covered = 0
    for v in seq:
        if not inst.nb[v] & ~covered:
            return False
        covered |= inst.nb[v]
    return True


def covered_mask(inst: Instance, seq: Iterable[int]) -> int:
    covered = 0
    for v in seq:
        covered |= inst.nb[v]
    return covered


def is_maximal(inst: Instance, seq: Iterable[int]) -> bool:
    seq = check_sequence(inst, seq)
    if not is_legal(inst, seq):
        raise NotLegalError(f"sequence {seq} is not legal")
    uncovered = ~covered_mask(inst, seq)
    # vertices of seq have N<v> already covered, so they never qualify
    return not any(m & uncovered for m in inst.nb)


@dataclass(frozen=True)
class TwinMap:
    """Result bookkeeping of :func:`twin_reduce`.

    ``kept`` lists the surviving vertices (new id ``i`` is ``kept[i]``) and
    ``representative`` sends every deleted vertex to the survivor it was a
    twin of.
    """

    kept: tuple
    representative: dict


def twin_reduce(inst: Instance) -> tuple[Instance, TwinMap]:
    """Delete twins (equal N<.>) until the instance is twin free.

    Of each twin pair the higher-indexed vertex is removed.
    """
    alive = list(range(inst.n))
    rep: dict[int, int] = {}
    nb = list(inst.nb)
    while True:
        alive_mask = mask_of(alive)
        first: dict[int, int] = {}
        doomed = []
        for v in alive:
            key = nb[v] & alive_mask
            if key in first:
                doomed.append(v)
                rep[v] = first[key]
            else:
                first[key] = v
        if not doomed:
            break
        # one deletion per round changes nothing for the remaining twins of the
        # same class, so dropping every duplicate at once is equivalent
        dead = set(doomed)
        alive = [v for v in alive if v not in dead]
    for v in list(rep):
        r = rep[v]
        while r in rep:
            r = rep[r]
        rep[v] = r
    reduced = inst.induced(alive)
    return reduced, TwinMap(tuple(alive), rep)


def components(inst: Instance) -> list[Instance]:
    """Split into connected components (each an induced sub-instance)."""
    g = inst.graph
    seen = 0
    out = []
    for s in range(g.n):
        if seen >> s & 1:
            continue
        comp = 1 << s
        frontier = comp
        while frontier:
            nxt = 0
            for v in bits(frontier):
                nxt |= g.masks[v]
            frontier = nxt & ~comp
            comp |= nxt
        seen |= comp
        out.append(inst.induced(bits(comp)))
    return out
