"""DIMACS ingestion, graph generators and the closed-set text format.

Random graphs draw from numpy's ``PCG64`` bit generator, seeded with the
64-bit seed given by the caller; the same seed always yields the same graph.
"""

from __future__ import annotations

import itertools
import warnings
from dataclasses import dataclass
from math import comb
from pathlib import Path

import numpy as np

from grundy.exceptions import BadParametersError, IndexOutOfRangeError, ParseError
from grundy.graph import Graph, Instance


class InstanceWarning(UserWarning):
    """Recoverable oddities in input files (duplicate edges, repeated ids)."""


def make_rng(seed):
    """The package-wide PRNG: numpy ``Generator`` over ``PCG64``."""
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.Generator(np.random.PCG64(seed))


def parse_dimacs(text: str) -> Graph:
    """Parse a DIMACS ``.col`` graph (``p edge n m`` header, 1-based ``e u v`` lines)."""
    n = None
    edges = set()
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line[0] == "c":
            continue
        parts = line.split()
        tag = parts[0]
        if tag == "p":
            if n is not None:
                raise ParseError("second problem line", lineno)
            if len(parts) < 3 or parts[1] not in ("edge", "edges", "col"):
                raise ParseError(f"malformed header {line!r}", lineno)
            try:
                n = int(parts[2])
            except ValueError:
                raise ParseError(f"malformed header {line!r}", lineno) from None
            if n < 0:
                raise ParseError("negative vertex count", lineno)
        elif tag == "e":
            if n is None:
                raise ParseError("edge line before the problem line", lineno)
            if len(parts) != 3:
                raise ParseError(f"malformed edge line {line!r}", lineno)
            try:
                u, v = int(parts[1]), int(parts[2])
            except ValueError:
                raise ParseError(f"malformed edge line {line!r}", lineno) from None
            if not (1 <= u <= n and 1 <= v <= n):
                raise IndexOutOfRangeError(f"line {lineno}: vertex out of range 1..{n} in {line!r}")
            if u == v:
                warnings.warn(f"line {lineno}: self-loop on {u} ignored", InstanceWarning, stacklevel=2)
                continue
            key = (min(u, v) - 1, max(u, v) - 1)
            if key in edges:
                warnings.warn(f"line {lineno}: duplicate edge {u}-{v} collapsed", InstanceWarning, stacklevel=2)
                continue
            edges.add(key)
        else:
            # n (node) and other DIMACS extension lines carry nothing we use
            continue
    if n is None:
        raise ParseError("missing problem line 'p edge n m'")
    return Graph.from_edges(n, sorted(edges))


def read_dimacs(path) -> Graph:
    return parse_dimacs(Path(path).read_text())


def write_dimacs(g: Graph, comment: str | None = None) -> str:
    lines = []
    if comment:
        lines.extend(f"c {c}" for c in comment.splitlines())
    lines.append(f"p edge {g.n} {g.n_edges}")
    lines.extend(f"e {u + 1} {v + 1}" for u, v in g.edges())
    return "\n".join(lines) + "\n"


def gen_path(n: int) -> Graph:
    if n < 1:
        raise BadParametersError("a path needs at least one vertex")
    return Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)])


def gen_cycle(n: int) -> Graph:
    if n < 3:
        raise BadParametersError("a cycle needs at least three vertices")
    return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def gen_web(n: int, k: int) -> Graph:
    """Web ``W_n^k``: ``i ~ j`` iff their circular distance is between 1 and k."""
    if k < 1 or n < 2 * (k + 1):
        raise BadParametersError(f"web needs k >= 1 and n >= 2(k+1); got n={n}, k={k}")
    edges = [(i, (i + d) % n) for i in range(n) for d in range(1, k + 1)]
    return Graph.from_edges(n, edges)


def gen_kneser(n: int, r: int) -> Graph:
    """Kneser graph: r-subsets of {1..n} in lexicographic order, adjacent iff disjoint."""
    if r < 2 or n < 2 * r + 1:
        raise BadParametersError(f"Kneser graph needs r >= 2 and n >= 2r+1; got n={n}, r={r}")
    subsets = [mask for mask in _lex_subset_masks(n, r)]
    adj = []
    for a in subsets:
        adj.append(tuple(j for j, b in enumerate(subsets) if not a & b))
    return Graph(len(subsets), tuple(adj))


def _lex_subset_masks(n, r):
    for combo in itertools.combinations(range(n), r):
        m = 0
        for x in combo:
            m |= 1 << x
        yield m


def kneser_subsets(n: int, r: int) -> list[tuple[int, ...]]:
    """1-based element tuples naming the Kneser vertices, in vertex order."""
    return [tuple(x + 1 for x in c) for c in itertools.combinations(range(n), r)]


def gen_gnp(n: int, p: float, seed=0) -> Graph:
    """Erdos-Renyi G(n, p); pairs (i<j) are drawn in lexicographic order."""
    if not 0.0 <= p <= 1.0:
        raise BadParametersError(f"p must lie in [0, 1], got {p}")
    rng = make_rng(seed)
    draws = rng.random(n * (n - 1) // 2)
    iu, ju = np.triu_indices(n, k=1)
    keep = draws < p
    return Graph.from_edges(n, zip(iu[keep].tolist(), ju[keep].tolist()))


def complement(g: Graph) -> Graph:
    full = (1 << g.n) - 1
    adj = []
    for v in range(g.n):
        m = full & ~g.masks[v] & ~(1 << v)
        adj.append(tuple(u for u in range(g.n) if m >> u & 1))
    return Graph(g.n, tuple(adj))


def parse_cset(text: str, n: int) -> frozenset:
    """Closed-set text: ``all``, ``none`` or one 1-based id per line (``#``/``c`` comments)."""
    stripped = text.strip()
    if stripped.lower() == "all":
        return frozenset(range(n))
    if stripped.lower() in ("none", ""):
        return frozenset()
    out = set()
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line or line.startswith("c "):
            continue
        try:
            v = int(line)
        except ValueError:
            raise ParseError(f"expected a vertex id, got {line!r}", lineno) from None
        if not 1 <= v <= n:
            raise IndexOutOfRangeError(f"line {lineno}: vertex {v} out of range 1..{n}")
        if v - 1 in out:
            warnings.warn(f"line {lineno}: vertex {v} listed twice", InstanceWarning, stacklevel=2)
        out.add(v - 1)
    return frozenset(out)


def format_cset(closed, n: int) -> str:
    if len(closed) == n:
        return "all\n"
    if not closed:
        return "none\n"
    return "".join(f"{v + 1}\n" for v in sorted(closed))


@dataclass(frozen=True)
class InstanceSpec:
    """Where an instance comes from.

    ``source`` is a string such as ``web:100,10``, ``kneser:8,3``,
    ``gnp:30,0.5``, ``path:7``, ``cycle:5``, ``complement:<source>`` or a
    DIMACS file path (optionally prefixed with ``dimacs:``).  ``cset`` is
    ``all``, ``none``, an explicit collection of 0-based ids, or a path to
    a closed-set file.
    """

    source: str
    cset: object = "all"
    seed: int = 0

    @property
    def name(self) -> str:
        return self.source.replace(",", "_").replace(":", "_").replace("/", "_")

    def graph(self) -> Graph:
        return _graph_from_source(self.source, self.seed)

    def build(self) -> Instance:
        g = self.graph()
        return Instance(g, resolve_cset(self.cset, g.n))


def resolve_cset(cset, n: int) -> frozenset:
    if isinstance(cset, str):
        key = cset.strip().lower()
        if key in ("all", "v"):
            return frozenset(range(n))
        if key in ("none", "empty", ""):
            return frozenset()
        return parse_cset(Path(cset).read_text(), n)
    return frozenset(int(v) for v in cset)


def _graph_from_source(source: str, seed) -> Graph:
    kind, _, rest = source.partition(":")
    if not rest:
        return read_dimacs(source)
    args = [a for a in rest.split(",") if a]
    try:
        if kind == "dimacs":
            return read_dimacs(rest)
        if kind == "complement":
            return complement(_graph_from_source(rest, seed))
        if kind == "path":
            return gen_path(int(args[0]))
        if kind == "cycle":
            return gen_cycle(int(args[0]))
        if kind == "web":
            return gen_web(int(args[0]), int(args[1]))
        if kind == "kneser":
            return gen_kneser(int(args[0]), int(args[1]))
        if kind == "gnp":
            return gen_gnp(int(args[0]), float(args[1]), seed if len(args) < 3 else int(args[2]))
    except (IndexError, ValueError) as exc:
        if isinstance(exc, BadParametersError):
            raise
        raise BadParametersError(f"cannot parse instance source {source!r}") from exc
    if Path(source).exists():
        return read_dimacs(source)
    raise BadParametersError(f"unknown instance source {source!r}")


def kneser_degree(n: int, r: int) -> int:
    return comb(n - r, r)
