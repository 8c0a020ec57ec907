from itertools import product

import numpy as np
import pytest

from conftest import cycle5, one_based, random_instance
from grundy.exact import legal_sequences, solve_exact
from grundy.exceptions import BadParametersError, DimensionMismatchError, NotLegalError, TooLongError
from grundy.graph import Graph, Instance, evaluate, is_legal
from grundy.ilp.model import (
    FORMULATIONS,
    Assignment,
    build_model,
    check_feasible,
    feasible_mask,
    parse_formulation,
    point_from_sequence,
)


def expected_counts(n, m, f, lb=0):
    keep, canon, dom = FORMULATIONS[f]
    slot = sum(1 for i in range(1, m + 1) if i > lb and (i == 1 or not canon))
    out = {"slot": slot, "once": n, "chain": n * (m - 1), "remove": n * m, "legal": n * (m - 1)}
    if keep:
        out["keep"] = n * m
    if canon:
        out["canon"] = m - max(2, lb + 1) + 1
    if dom:
        out["dom"] = n
    if lb:
        out["fix"] = lb
    return {k: v for k, v in out.items() if v}


class TestBuild:
    def test_f1_cycle(self, c5):
        model = build_model(c5, 1, 3)
        assert model.family_counts() == {"slot": 3, "once": 5, "chain": 10, "remove": 15, "legal": 10}
        assert len(model.all_rows()) == 43 and model.n_vars == 30

    @pytest.mark.parametrize("f", range(1, 9))
    @pytest.mark.parametrize("m", [1, 2, 4])
    def test_counts_all_formulations(self, f, m):
        inst = random_instance(np.random.default_rng(f * 10 + m), 6, 0.4)
        assert build_model(inst, f, m).family_counts() == expected_counts(6, m, f)

    def test_f4_vs_f2(self, c5):
        f2 = build_model(c5, 2, 3).family_counts()
        f4 = build_model(c5, 4, 3).family_counts()
        assert f2["slot"] == 3 and f4["slot"] == 1
        assert "canon" not in f2 and f4["canon"] == 2
        rows = [r.name for r in build_model(c5, 4, 3).rows if r.family in ("slot", "canon")]
        assert rows == ["slot_1", "canon_2", "canon_3"]

    def test_lb_fix(self, c5):
        model = build_model(c5, "F4", 3, lb_fix=2)
        names = [r.name for r in model.rows if r.family in ("slot", "canon", "fix")]
        assert names == ["canon_3", "fix_1", "fix_2"]
        assert all(r.sense == "=" and r.rhs == 1 for r in model.rows if r.family == "fix")

    @pytest.mark.parametrize("f", range(1, 9))
    def test_lb_fix_counts(self, f):
        inst = cycle5()
        for lb in range(0, 4):
            assert build_model(inst, f, 3, lb_fix=lb).family_counts() == expected_counts(5, 3, f, lb)

    def test_names_and_layout(self, c5):
        model = build_model(c5, 4, 3)
        assert model.var_name(model.ycol(0, 1)) == "y_1_1"
        assert model.var_name(model.xcol(4, 3)) == "x_5_3"
        assert model.col_of("x_2_2") == model.xcol(1, 2)
        assert list(model.objective()) == [1] * 15 + [0] * 15

    def test_bad_parameters(self, c5):
        with pytest.raises(BadParametersError):
            build_model(c5, 9, 3)
        with pytest.raises(BadParametersError):
            build_model(c5, 4, 0)
        with pytest.raises(BadParametersError):
            build_model(c5, 4, 3, lb_fix=4)
        assert parse_formulation("f7") == 7


class TestPoints:
    def test_worked_sequence(self, c5):
        model = build_model(c5, 4, 3)
        a = point_from_sequence(model, one_based(3, 4, 5))
        assert check_feasible(model, a) == [] and a.y.sum() == 3

    def test_empty_sequence(self, c5):
        for f in (1, 2, 3, 4):
            model = build_model(c5, f, 3)
            a = point_from_sequence(model, ())
            assert a.y.sum() == 0 and a.x.min() == 1
            assert check_feasible(model, a) == []

    def test_short_dominating_on_f8(self, c5):
        model = build_model(c5, 8, 3)
        a = point_from_sequence(model, one_based(5, 3))
        assert check_feasible(model, a) == [] and a.y.sum() == 2

    def test_errors(self, c5):
        model = build_model(c5, 4, 3)
        with pytest.raises(NotLegalError):
            point_from_sequence(model, one_based(3, 4, 5, 1))
        with pytest.raises(TooLongError):
            point_from_sequence(build_model(c5, 4, 2), one_based(3, 4, 5))

    def test_two_in_first_slot(self, c5):
        model = build_model(c5, 4, 3)
        a = point_from_sequence(model, ())
        a.y[2][0] = a.y[3][0] = 1
        assert "slot_1" in {v.row for v in check_feasible(model, a)}

    def test_gap_violates_canon(self, c5):
        model = build_model(c5, 4, 3)
        # (3, _, 4): legal slots, but slot 2 is empty
        a = point_from_sequence(model, ())
        a.y[2][0] = a.y[3][2] = 1
        covered = set()
        for i, v in ((1, 2), (2, None), (3, 3)):
            if v is not None:
                covered |= set(c5.neighborhood(v))
            for u in range(5):
                a.x[u][i - 1] = int(u not in covered)
        rows = {v.row for v in check_feasible(model, a)}
        assert rows == {"canon_3"}
        assert check_feasible(build_model(c5, 2, 3), a) == []

    def test_dimension_mismatch(self, c5):
        with pytest.raises(DimensionMismatchError):
            check_feasible(build_model(c5, 4, 3), Assignment(np.zeros((5, 2)), np.zeros((5, 2))))
        with pytest.raises(DimensionMismatchError):
            feasible_mask(build_model(c5, 4, 3), np.zeros((2, 7)))

    def test_fractional_exact(self, c5):
        model = build_model(c5, 1, 3)
        p = point_from_sequence(model, one_based(3, 4, 5)).vector()
        q = point_from_sequence(model, one_based(1)).vector()
        mid = Assignment.from_vector(0.5 * p + 0.5 * q, 5, 3)
        assert not mid.is_integral()
        assert check_feasible(model, mid) == []
        # slot 1 already holds 1/2 + 1/2
        mid.y[1][0] = 1e-9
        assert "slot_1" in {v.row for v in check_feasible(model, mid)}

    def test_bounds_reported(self, c5):
        model = build_model(c5, 1, 3)
        a = point_from_sequence(model, ())
        a.y[0][0] = 2
        assert "bound_y_1_1" in {v.row for v in check_feasible(model, a)}


def _canonical_array(inst, seq, m):
    """The y block of the left-justified slot array of ``seq`` (row-major, v then i)."""
    y = np.zeros((inst.n, m), dtype=np.int64)
    for i, v in enumerate(seq):
        y[v, i] = 1
    return y.ravel()


class TestCorrespondence:
    def test_random_instances(self):
        rng = np.random.default_rng(2024)
        for _ in range(40):
            inst = random_instance(rng, int(rng.integers(1, 7)), float(rng.uniform(0.2, 0.8)))
            g = solve_exact(inst).gamma
            f4, f8 = build_model(inst, 4, g), build_model(inst, 8, g)
            seqs = list(legal_sequences(inst))
            pts = np.array([point_from_sequence(f4, s).vector() for s in seqs])
            assert feasible_mask(f4, pts).all()
            assert (pts[:, : inst.n * g].sum(axis=1) == [len(s) for s in seqs]).all()
            dom = [k for k, s in enumerate(seqs) if evaluate(inst, s).is_dominating]
            assert feasible_mask(f8, pts[dom]).all()
            other = [k for k in range(len(seqs)) if k not in set(dom)]
            assert not feasible_mask(f8, pts[other]).any()

    @pytest.mark.parametrize("n,m", [(2, 2), (3, 2), (3, 3), (4, 2)])
    def test_f4_integer_points_exhaustive(self, n, m):
        """All 0/1 points of F4 are exactly the canonical embeddings of legal sequences."""
        rng = np.random.default_rng(n * 7 + m)
        cols = 2 * n * m
        grid = np.array(list(product((0, 1), repeat=cols)), dtype=np.int8)
        for _ in range(4):
            inst = random_instance(rng, n, 0.5)
            model = build_model(inst, 4, m)
            feas = grid[feasible_mask(model, grid)]
            want = {tuple(point_from_sequence(model, s).vector())
                    for s in legal_sequences(inst, max_len=m)}
            assert {tuple(p) for p in feas.tolist()} == want

    def test_non_legal_arrays_rejected(self):
        """Arrays of distinct vertices, one per slot at most, on n <= 5 and m <= 4."""
        rng = np.random.default_rng(11)
        for n in range(2, 6):
            for m in range(1, 5):
                inst = random_instance(rng, n, 0.5)
                model = build_model(inst, 4, m)
                pts, legal = [], []
                for slots in product(range(-1, n), repeat=m):
                    used = [v for v in slots if v >= 0]
                    if len(set(used)) != len(used):
                        continue
                    y = np.zeros((n, m), dtype=np.int64)
                    x = np.zeros((n, m), dtype=np.int64)
                    covered = set()
                    for i, v in enumerate(slots):
                        if v >= 0:
                            y[v, i] = 1
                            covered |= set(inst.neighborhood(v))
                        x[:, i] = [u not in covered for u in range(n)]
                    gapless = all(v >= 0 for v in slots[: len(used)])
                    pts.append(np.concatenate([y.ravel(), x.ravel()]))
                    legal.append(gapless and is_legal(inst, used))
                mask = feasible_mask(model, np.array(pts))
                assert mask.tolist() == legal

    def test_objective_equals_gamma_via_lp_points(self):
        inst = Instance(Graph.from_edges(4, [(0, 1), (1, 2), (2, 3)]), frozenset())
        g = solve_exact(inst).gamma
        model = build_model(inst, 4, inst.n)
        best = max(len(s) for s in legal_sequences(inst))
        assert best == g
        assert feasible_mask(model, np.array([point_from_sequence(model, s).vector()
                                              for s in legal_sequences(inst) if len(s) == g])).all()
