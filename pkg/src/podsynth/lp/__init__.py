"""Linear optimization substrate shared by synthesis, evaluation and routing."""

from .model import FEAS_TOL, GAP_TOL, LinearModel, ModelError, NumericalError, Solution, Status
from .mps import export_standard, read_mps, write_mps
from .solve import Budget, dual_objective, solve_lp, solve_milp

__all__ = [
    "FEAS_TOL",
    "GAP_TOL",
    "Budget",
    "LinearModel",
    "ModelError",
    "NumericalError",
    "Solution",
    "Status",
    "dual_objective",
    "export_standard",
    "read_mps",
    "solve_lp",
    "solve_milp",
    "write_mps",
]
