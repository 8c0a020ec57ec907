"""Longest legal dominating sequences (general Grundy domination) in graphs."""

from grundy.closed_form import gamma_path, gamma_web, is_gconf, m1_bound
from grundy.exact import SolveResult, Status, brute_gamma, legal_sequences, solve_exact
from grundy.graph import (
    Graph,
    Instance,
    build_instance,
    components,
    evaluate,
    is_legal,
    is_maximal,
    twin_reduce,
)
from grundy.heuristics import Bounds, delta_t, initial_bounds, m_t, maximalize
from grundy.instance_io import InstanceSpec, gen_cycle, gen_gnp, gen_kneser, gen_path, gen_web, parse_dimacs
from grundy.tabu import TabuLimits, improve_loop, run_tabu, tabu_search

__version__ = "0.1.0"

__all__ = [
    "Bounds", "Graph", "Instance", "InstanceSpec", "SolveResult", "Status", "TabuLimits",
    "brute_gamma", "build_instance", "components", "delta_t", "evaluate", "gamma_path", "gamma_web",
    "gen_cycle", "gen_gnp", "gen_kneser", "gen_path", "gen_web", "improve_loop", "initial_bounds",
    "is_gconf", "is_legal", "is_maximal", "legal_sequences", "m1_bound", "m_t", "maximalize",
    "parse_dimacs", "run_tabu", "solve_exact", "tabu_search", "twin_reduce",
]
