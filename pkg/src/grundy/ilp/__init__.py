"""Integer programming models, valid inequalities and LP backends."""

from grundy.ilp.backends import CommandBackend, LPResult, ScipyBackend, default_backend
from grundy.ilp.cutloop import CutSchedule, CutStats, cutting_plane_root
from grundy.ilp.cuts import (
    Cut,
    F1Points,
    Separator,
    check_cut_validity,
    cut_lhs,
    make_general_cut,
    make_type1,
    make_type2,
)
from grundy.ilp.lpfile import emit_lp, format_solution, parse_lp, parse_solution
from grundy.ilp.model import (
    FORMULATIONS,
    Assignment,
    Model,
    Row,
    Violation,
    build_model,
    check_feasible,
    feasible_mask,
    parse_formulation,
    point_from_sequence,
)

__all__ = [
    "Assignment", "CommandBackend", "Cut", "CutSchedule", "CutStats", "F1Points", "FORMULATIONS",
    "LPResult", "Model", "Row", "ScipyBackend", "Separator", "Violation", "build_model",
    "check_cut_validity", "check_feasible", "cut_lhs", "cutting_plane_root", "default_backend",
    "emit_lp", "feasible_mask", "format_solution", "make_general_cut", "make_type1", "make_type2",
    "parse_formulation", "parse_lp", "parse_solution", "point_from_sequence",
]
