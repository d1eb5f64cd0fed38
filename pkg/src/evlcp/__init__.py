"""Extended vertical linear complementarity problems.

Solve ``min{M_0 x + q_0, ..., M_k x + q_k} = 0``, test the row W-property
and evaluate absolute and relative perturbation bounds for the solution.
"""
from .bounds import (
    BoundReport,
    BoundSet,
    alpha_sample,
    bound_general,
    bound_q_perturbation,
    bound_vlcp,
    delta_upper,
    gamma_upper,
    relative_bound_componentwise,
    relative_bounds,
)
from .kernels import BACKEND
from .model import (
    DiagonalSelection,
    EvlcpProblem,
    assemble_S,
    min_map,
    residuals,
    selection_matrices,
    verify_solution,
)
from .solver import SolveResult, solve, solve_enumerate, solve_newton
from .wcheck import WCheckReport, check_exact_vertex, check_sdd, check_spectral

__version__ = "0.1.0"
