"""Heuristic solvers: simulated annealing and multi-start tabu search.

Structured objectives (:class:`QuboObjective`, :class:`ZeroOneLossObjective`)
are routed to the kernel backend (compiled extension when available, numpy
fallback otherwise); arbitrary callables run through a generic Python loop
that follows the exact same proposal and acceptance sequence, evaluating the
objective in full instead of incrementally.
"""

from __future__ import annotations

import math
import time

import numpy as np

from .. import _kernels
from .._kernels._purecore import SplitMix64, _random_bits
from ..objective import QuboProblem
from .objectives import QuboObjective, ZeroOneLossObjective
from .types import AnnealSchedule, SolveResult, TabuConfig

__all__ = ["solve_anneal", "solve_tabu"]


def _finish(objective, bits, evaluations, t0, seed, trace) -> SolveResult:
    bits = np.asarray(bits, dtype=np.int8)
    return SolveResult(
        best_bits=bits,
        best_energy=float(objective(bits)),
        evaluations=int(evaluations),
        wall_time=time.perf_counter() - t0,
        seed=int(seed),
        trace=trace,
    )


def _anneal_generic(objective, num_vars, schedule, seed, collect_trace):
    """Black-box annealing: full objective calls in the place of the
    kernels' incremental deltas, identical random stream otherwise."""
    rng = SplitMix64(seed)
    x = _random_bits(rng, num_vars)
    energy = float(objective(x.copy()))
    evaluations = 1
    best_energy = energy
    best_bits = x.copy()
    trace = [best_energy] if collect_trace else None

    T = schedule.t_initial
    while T >= schedule.t_final:
        for _ in range(schedule.steps_per_temperature):
            j = rng.next_below(num_vars)
            x[j] ^= 1
            candidate = float(objective(x.copy()))
            evaluations += 1
            d = candidate - energy
            accept = d <= 0.0 or rng.next_double() < math.exp(-d / T)
            if accept:
                energy = candidate
                if energy < best_energy:
                    best_energy = energy
                    best_bits = x.copy()
            else:
                x[j] ^= 1
            if collect_trace:
                trace.append(best_energy)
        T *= schedule.cooling_factor

    trace_arr = np.array(trace) if collect_trace else None
    return best_bits, evaluations, trace_arr


def solve_anneal(objective, num_vars: int | None = None,
                 schedule: AnnealSchedule | None = None, seed: int = 0,
                 collect_trace: bool = False,
                 force_generic: bool = False) -> SolveResult:
    """Metropolis single-bit-flip annealing under an exponential schedule.

    Fully deterministic for a given seed. ``force_generic`` bypasses the
    kernel fast paths and treats a structured objective as a black box
    (useful for cross-checking the incremental bookkeeping).
    """
    if num_vars is None:
        num_vars = getattr(objective, "num_vars", None)
        if num_vars is None:
            raise ValueError("num_vars is required for plain callables")
    if schedule is None:
        schedule = AnnealSchedule.default_for(loss_scale=float(num_vars),
                                              num_vars=num_vars)
    seed = int(seed) & (2**64 - 1)
    t0 = time.perf_counter()

    if not force_generic and isinstance(objective, ZeroOneLossObjective):
        bits, _, evals, trace = _kernels.anneal_zero_one(
            objective.table.H, objective.table.y, objective.lam,
            objective.coeff, schedule.t_initial, schedule.cooling_factor,
            schedule.steps_per_temperature, schedule.t_final, seed,
            collect_trace,
        )
    elif not force_generic and isinstance(objective, QuboObjective):
        bits, _, evals, trace = _kernels.anneal_qubo(
            objective.Q, schedule.t_initial, schedule.cooling_factor,
            schedule.steps_per_temperature, schedule.t_final, seed,
            collect_trace,
        )
    else:
        bits, evals, trace = _anneal_generic(
            objective, num_vars, schedule, seed, collect_trace)
    return _finish(objective, bits, evals, t0, seed, trace)


def solve_tabu(problem, config: TabuConfig | None = None, seed: int = 0,
               collect_trace: bool = False) -> SolveResult:
    """Multi-start tabu search on a QUBO.

    Start ``k`` draws its initial state from seed ``seed ^ k``, so starts
    are independent and may run in any order (the current kernels run them
    sequentially); the merge tie-breaks on (energy, bit-vector value),
    keeping the result schedule-independent.
    """
    if isinstance(problem, QuboProblem):
        objective = QuboObjective(problem)
    elif isinstance(problem, QuboObjective):
        objective = problem
    else:
        objective = QuboObjective(np.asarray(problem, dtype=np.float64))
    if config is None:
        config = TabuConfig()
    tenure, max_iter = config.resolve(objective.num_vars)
    seed = int(seed) & (2**64 - 1)
    t0 = time.perf_counter()
    bits, _, evals, trace = _kernels.tabu_qubo(
        objective.Q, config.num_starts, tenure, max_iter, seed,
        config.aspiration, collect_trace,
    )
    return _finish(objective, bits, evals, t0, seed, trace)
