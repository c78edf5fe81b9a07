"""Solvers for the binary training problems.

Three routes: exhaustive enumeration (the oracle), simulated annealing
(used for the 0-1 loss), and multi-start tabu search (used for the QUBO).
"""

from .exhaustive import MAX_EXHAUSTIVE_VARS, solve_exhaustive
from .heuristics import solve_anneal, solve_tabu
from .objectives import QuboObjective, ZeroOneLossObjective
from .types import AnnealSchedule, SolveResult, TabuConfig, save_trace_csv
from .._kernels import active_backend

__all__ = [
    "solve_exhaustive",
    "solve_anneal",
    "solve_tabu",
    "QuboObjective",
    "ZeroOneLossObjective",
    "SolveResult",
    "AnnealSchedule",
    "TabuConfig",
    "save_trace_csv",
    "active_backend",
    "MAX_EXHAUSTIVE_VARS",
]
