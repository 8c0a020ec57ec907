import json
import sys

import numpy as np
import pytest

from grundy import bench
from grundy.bench import PipelineOptions, RunReport, pipeline, sweep
from grundy.cli import main
from grundy.closed_form import gamma_web
from grundy.exact import solve_exact
from grundy.exceptions import BadParametersError
from grundy.graph import Instance
from grundy.instance_io import InstanceSpec, gen_kneser, gen_web, read_dimacs

FAST = PipelineOptions(tabu_secs=5, tabu_iters=5000)


def run_json(capsys, *argv):
    assert main(list(argv) + ["--json"]) == 0
    return json.loads(capsys.readouterr().out)


class TestPipeline:
    def test_cycle(self):
        rep = pipeline(InstanceSpec("cycle:5", "all"), FAST)
        assert rep.lb_final == rep.ub_final == 3 and rep.status == "optimal" and rep.time < 1

    def test_kneser_open(self):
        rep = pipeline(InstanceSpec("kneser:5,2", "none"), FAST)
        assert rep.lb_final == rep.ub_final == 6

    @pytest.mark.parametrize("engine", ["dfs", "milp", "cutloop"])
    def test_engines_sandwich(self, engine):
        spec = InstanceSpec("gnp:12,0.3,5", "all")
        gamma = solve_exact(spec.build()).gamma
        rep = pipeline(spec, PipelineOptions(engine=engine, tabu_secs=2, tabu_iters=2000))
        assert rep.lb_initial <= rep.lb_final <= gamma <= rep.ub_final <= rep.ub_initial
        if engine != "cutloop":
            assert rep.status == "optimal" and rep.lb_final == gamma

    def test_heuristic_only_web(self):
        rep = pipeline(Instance(gen_web(40, 5), frozenset(range(40))), PipelineOptions(engine="none"))
        assert rep.lb_final == gamma_web(40, 5, range(40)) == 30

    def test_bad_engine(self):
        with pytest.raises(BadParametersError):
            PipelineOptions(engine="cplex")

    def test_relgap(self):
        rep = RunReport("x", 1, 0.0, "V", 4, 5, 4, 5, "open", "none", 0, 0.0)
        assert rep.relgap == 25.0


class TestSweep:
    def test_small_grid_all_solved(self):
        res = sweep([(10, 0.5)], seeds=[0], replicates=3, options=FAST)
        assert len(res) == 6 and all(r.status == "optimal" for _, r in res)
        assert sorted(r.cset for _, r in res) == ["V"] * 3 + ["empty"] * 3
        summary = bench.summary_csv(res).splitlines()
        assert summary == ["n,p,runs,solved,relgap", "10,0.5,6,6,-"]

    def test_rows_match_oracle(self):
        res = sweep([(8, 0.4)], seeds=[3], replicates=2, options=FAST)
        for (n, p, rep), r in res:
            g, _ = bench.cell_graph(n, p, rep, 3)
            closed = frozenset(range(n)) if r.cset == "V" else frozenset()
            assert r.lb_final == solve_exact(Instance(g, closed)).gamma

    def test_cell_graph_deterministic(self):
        a, _ = bench.cell_graph(12, 0.2, 1, 5)
        b, _ = bench.cell_graph(12, 0.2, 1, 5)
        assert a.edges() == b.edges() and all(a.adj)

    def test_empty_grid(self):
        assert bench.reports_csv(sweep([], options=FAST)) == ",".join(bench.CSV_FIELDS) + "\n"

    def test_workers_match_serial(self):
        serial = bench.reports_csv(sweep([(8, 0.5)], replicates=2, options=FAST))
        pooled = bench.reports_csv(sweep([(8, 0.5)], replicates=2, options=FAST, workers=2))
        assert serial == pooled


class TestOracleSuites:
    def test_small_runs(self):
        assert bench.verify_paths(5).ok
        assert bench.verify_webs(9, samples=5).ok
        assert bench.verify_reductions(20).ok


class TestCli:
    def test_bounds_kneser(self, capsys):
        out = run_json(capsys, "bounds", "--instance", "kneser:8,3", "--t", "3")
        assert out["m1"] == 46 and out["m3"] == 37 and out["n"] == 56
        assert out["lb"] >= 21 and len(out["sequence"]) == out["lb"]

    def test_text_output(self, capsys):
        assert main(["bounds", "--instance", "cycle:5"]) == 0
        assert "m1: 3" in capsys.readouterr().out

    def test_csv_output(self, capsys):
        assert main(["bounds", "--instance", "cycle:5", "--csv"]) == 0
        head, row = capsys.readouterr().out.splitlines()
        assert head.split(",")[:2] == ["n", "m1"] and row.split(",")[:2] == ["5", "3"]

    def test_generate_round_trip(self, tmp_path):
        out, cs = tmp_path / "k.col", tmp_path / "k.cset"
        assert main(["generate", "--instance", "kneser:5,2", "--cset", "none",
                     "--out", str(out), "--cset-out", str(cs)]) == 0
        assert read_dimacs(out).edges() == gen_kneser(5, 2).edges()
        assert main(["solve", "--instance", str(out), "--cset", str(cs), "--json"]) == 0

    def test_solve(self, capsys):
        out = run_json(capsys, "solve", "--instance", "cycle:5", "--tabu-secs", "2")
        assert out["lb_final"] == out["ub_final"] == 3 and out["status"] == "optimal"
        assert sorted(out["sequence"]) == sorted(set(out["sequence"])) and min(out["sequence"]) >= 1

    def test_solve_skip_heuristics(self, capsys):
        out = run_json(capsys, "solve", "--instance", "kneser:5,2", "--cset", "none", "--skip-heuristics")
        assert out["gamma"] == 6

    def test_tabu_fixed_k(self, capsys):
        out = run_json(capsys, "tabu", "--instance", "web:20,3", "--k", "14", "--max-secs", "20")
        assert out["status"] == "success" and out["length"] >= 14

    def test_tabu_loop(self, capsys):
        out = run_json(capsys, "tabu", "--instance", "cycle:5")
        assert out["lb"] == 3

    def test_emit(self, tmp_path, capsys):
        assert main(["emit", "--instance", "cycle:5", "--formulation", "F1", "--m", "3", "--lbfix", "0"]) == 0
        text = capsys.readouterr().out
        assert text.count(" <= 1\n") >= 43 and "Binaries" in text
        path = tmp_path / "m.lp"
        assert main(["emit", "--instance", "cycle:5", "--m", "3", "--lbfix", "2", "--out", str(path), "--relax"]) == 0
        lp = path.read_text()
        assert "fix_2:" in lp and "slot_1:" not in lp and "Binaries" not in lp

    def test_emit_decide(self, capsys):
        assert main(["emit", "--instance", "cycle:5", "--decide", "--tabu-secs", "1"]) == 0
        assert "m=4 lb_fix=3" in capsys.readouterr().out.splitlines()[0]

    def test_cutloop_command_backend(self, capsys):
        cmd = f"{sys.executable} -m grundy.lpsolve {{lp}} {{sol}}"
        out = run_json(capsys, "cutloop", "--instance", "cycle:5", "--m", "3", "--lbfix", "3",
                       "--backend-cmd", cmd, "--cuts", "t1,t2")
        assert out["type1_enabled"] and out["type2_enabled"] and out["bounds"][-1] >= 3 - 1e-6

    def test_sweep_byte_identical(self, tmp_path):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        argv = ["sweep", "--n", "8", "--p", "0.4", "--replicates", "1", "--tabu-secs", "2"]
        assert main(argv + ["--out", str(a), "--summary", str(tmp_path / "s.csv")]) == 0
        assert main(argv + ["--out", str(b)]) == 0
        assert a.read_bytes() == b.read_bytes()
        assert (tmp_path / "s.csv").read_text().startswith("n,p,runs,solved,relgap\n")

    def test_sweep_empty(self, capsys):
        assert main(["sweep", "--n", "", "--p", "0.5"]) == 0
        assert capsys.readouterr().out.strip() == ",".join(bench.CSV_FIELDS)

    def test_verify(self, capsys):
        assert main(["verify", "--path-n", "4", "--web-n", "8", "--web-samples", "3", "--reductions", "10"]) == 0
        lines = capsys.readouterr().out.splitlines()
        assert len(lines) == 3 and all(ln.startswith("PASS") for ln in lines)

    def test_errors_exit_2(self, capsys):
        assert main(["bounds", "--instance", "web:5,3"]) == 2
        assert "grundy: error:" in capsys.readouterr().err
        assert main(["bounds"]) == 2
        assert main(["bounds", "--instance", "/nonexistent.col"]) == 2

    def test_module_entry(self):
        import subprocess
        res = subprocess.run([sys.executable, "-m", "grundy", "bounds", "--instance", "path:4", "--json"],
                             capture_output=True, text=True, check=True)
        assert json.loads(res.stdout)["m1"] >= 3


def test_reports_invariants():
    rng = np.random.default_rng(0)
    for seed in rng.integers(0, 1000, size=5):
        rep = pipeline(InstanceSpec(f"gnp:9,0.4,{seed}", "all"), FAST)
        assert rep.lb_initial <= rep.lb_final <= rep.ub_final <= rep.ub_initial
