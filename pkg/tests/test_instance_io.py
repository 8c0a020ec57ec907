import warnings
from math import comb

import numpy as np
import pytest

from grundy.exceptions import BadParametersError, IndexOutOfRangeError, ParseError
from grundy.graph import Graph
from grundy.instance_io import (
    InstanceSpec,
    InstanceWarning,
    complement,
    format_cset,
    gen_cycle,
    gen_gnp,
    gen_kneser,
    gen_path,
    gen_web,
    kneser_subsets,
    parse_cset,
    parse_dimacs,
    write_dimacs,
)


class TestDimacs:
    def test_path(self):
        g = parse_dimacs("c a path\np edge 3 2\ne 1 2\ne 2 3\n")
        assert g == gen_path(3)

    def test_duplicate_warns_once(self):
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            g = parse_dimacs("p edge 3 2\ne 1 2\ne 1 2\n")
        assert g.n_edges == 1
        assert sum(issubclass(w.category, InstanceWarning) for w in caught) == 1

    def test_vertex_out_of_range(self):
        with pytest.raises(IndexOutOfRangeError):
            parse_dimacs("p edge 3 1\ne 4 1\n")

    def test_edge_before_header(self):
        with pytest.raises(ParseError, match="line 1"):
            parse_dimacs("e 1 2\np edge 2 1\n")

    @pytest.mark.parametrize("header", ["p graph 3 1", "p edge x 1", "p"])
    def test_malformed_header(self, header):
        with pytest.raises(ParseError):
            parse_dimacs(header + "\n")

    def test_roundtrip(self):
        g = gen_gnp(12, 0.4, 3)
        assert parse_dimacs(write_dimacs(g, "x")) == g


class TestGenerators:
    def test_web_is_cycle(self):
        g = gen_web(8, 1)
        assert g == gen_cycle(8)
        assert all(g.degree(v) == 2 for v in range(8))

    def test_web_degrees(self):
        assert all(gen_web(8, 3).degree(v) == 6 for v in range(8))
        g = gen_web(6, 2)
        assert all(g.degree(v) == 4 for v in range(6)) and g.n_edges == 12

    def test_web_parameters(self):
        with pytest.raises(BadParametersError):
            gen_web(7, 3)

    def test_petersen(self):
        g = gen_kneser(5, 2)
        assert g.n == 10 and all(g.degree(v) == 3 for v in range(10))

    @pytest.mark.parametrize("n,r,size", [(8, 3, 56), (7, 3, 35)])
    def test_kneser_sizes(self, n, r, size):
        g = gen_kneser(n, r)
        assert g.n == size
        assert {g.degree(v) for v in range(g.n)} == {comb(n - r, r)}

    def test_kneser_adjacency_is_disjointness(self):
        subs = kneser_subsets(6, 2)
        assert subs == sorted(subs)
        g = gen_kneser(6, 2)
        for a in range(g.n):
            for b in range(a + 1, g.n):
                assert g.has_edge(a, b) == (not set(subs[a]) & set(subs[b]))

    @pytest.mark.parametrize("n,r", [(5, 1), (4, 2)])
    def test_kneser_parameters(self, n, r):
        with pytest.raises(BadParametersError):
            gen_kneser(n, r)

    def test_gnp_extremes(self):
        assert gen_gnp(6, 1.0, 1).n_edges == 15
        assert gen_gnp(6, 0.0, 1).n_edges == 0

    def test_gnp_deterministic(self):
        assert gen_gnp(30, 0.5, 42).edges() == gen_gnp(30, 0.5, 42).edges()
        assert gen_gnp(30, 0.5, 42).edges() != gen_gnp(30, 0.5, 43).edges()

    def test_gnp_density(self):
        n, p = 200, 0.3
        pairs = n * (n - 1) // 2
        m = gen_gnp(n, p, 7).n_edges
        assert abs(m - p * pairs) < 3 * np.sqrt(pairs * p * (1 - p))

    def test_complements(self):
        c5 = gen_cycle(5)
        assert _isomorphic(complement(c5), c5)
        assert _isomorphic(complement(gen_path(4)), gen_path(4))
        g = gen_gnp(9, 0.5, 1)
        assert complement(complement(g)) == g

    def test_single_vertex_path(self):
        assert gen_path(1) == Graph(1, ((),))


def _isomorphic(a: Graph, b: Graph) -> bool:
    from itertools import permutations

    if a.n != b.n or a.n_edges != b.n_edges:
        return False
    eb = set(b.edges())
    for perm in permutations(range(a.n)):
        if all(tuple(sorted((perm[u], perm[v]))) in eb for u, v in a.edges()):
            return True
    return False


class TestCset:
    def test_ids(self):
        assert parse_cset("1\n3\n", 3) == {0, 2}

    def test_keywords(self):
        assert parse_cset("all", 4) == {0, 1, 2, 3}
        assert parse_cset("none", 4) == frozenset()

    def test_out_of_range(self):
        with pytest.raises(IndexOutOfRangeError):
            parse_cset("4\n", 3)

    def test_duplicate_warns(self):
        with pytest.warns(InstanceWarning):
            assert parse_cset("2\n2\n", 3) == {1}

    def test_format_roundtrip(self):
        for cset in ({0, 2}, set(), {0, 1, 2}):
            assert parse_cset(format_cset(cset, 3), 3) == cset


class TestSpec:
    @pytest.mark.parametrize("source,n", [
        ("web:100,10", 100), ("kneser:8,3", 56), ("gnp:30,0.5", 30), ("path:7", 7),
        ("cycle:5", 5), ("complement:cycle:6", 6),
    ])
    def test_sources(self, source, n):
        assert InstanceSpec(source).build().n == n

    def test_dimacs_file_and_cset_file(self, tmp_path):
        f = tmp_path / "g.col"
        f.write_text("p edge 3 2\ne 1 2\ne 2 3\n")
        c = tmp_path / "g.cset"
        c.write_text("2\n")
        inst = InstanceSpec(str(f), str(c)).build()
        assert inst.graph == gen_path(3) and inst.closed == {1}
        assert InstanceSpec("dimacs:" + str(f)).build().n == 3

    def test_unknown(self):
        with pytest.raises(BadParametersError):
            InstanceSpec("nosuch:3").build()

    def test_seeded_gnp(self):
        assert InstanceSpec("gnp:20,0.3", seed=5).graph() == InstanceSpec("gnp:20,0.3,5").graph()
