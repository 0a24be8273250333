"""Exact Shannon complexity of bipartite secret-sharing access structures."""

from .core import Staircase, QualMap, fmt_q, is_qualified, qualmap, staircase_from_points
from .errors import KappaError, SolverError
from .ratlp import LpProblem, LpSolution, Status, check_solution, lp_problem, solve
from .shannon import (KappaResult, RankGrid, bound_matus, bound_matus_improved,
                      bound_single_step, build_shannon_lp, kappa, verify_rankgrid)
from .witness import (EdgeGrid, check_conditions, construct_height1, construct_regular_equal,
                      construct_single_step, edges_to_rankgrid, rankgrid_to_edges)

__version__ = "0.1.0"

__all__ = [
    "Staircase", "QualMap", "fmt_q", "is_qualified", "qualmap", "staircase_from_points",
    "KappaError", "SolverError",
    "LpProblem", "LpSolution", "Status", "check_solution", "lp_problem", "solve",
    "KappaResult", "RankGrid", "bound_matus", "bound_matus_improved", "bound_single_step",
    "build_shannon_lp", "kappa", "verify_rankgrid",
    "EdgeGrid", "check_conditions", "construct_height1", "construct_regular_equal",
    "construct_single_step", "edges_to_rankgrid", "rankgrid_to_edges",
]
