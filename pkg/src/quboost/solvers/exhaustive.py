"""Exhaustive enumeration: the ground-truth oracle the heuristics are
measured against.

There is exactly one implementation, independent of the kernel backend,
so heuristic-vs-oracle comparisons never share code with the thing they
check. Objectives exposing ``value_batch`` are enumerated in vectorized
chunks; plain callables are evaluated state by state (fine for the small
sizes the oracle is meant for).
"""

from __future__ import annotations

import time

import numpy as np

from .types import SolveResult

__all__ = ["solve_exhaustive", "MAX_EXHAUSTIVE_VARS"]

MAX_EXHAUSTIVE_VARS = 24
_CHUNK = 1 << 15


def _decode(index: int, num_vars: int) -> np.ndarray:
    """Bit k of the state index (LSB first) becomes variable k."""
    return ((index >> np.arange(num_vars)) & 1).astype(np.int8)


def solve_exhaustive(objective, num_vars: int, seed: int = 0) -> SolveResult:
    """Global minimum over all 2**num_vars bit vectors.

    Ties break toward the lowest bit vector read as an unsigned integer
    (variable k carries weight 2**k). The cap of 24 variables keeps the
    enumeration at desk scale; larger problems are a job for the heuristics.
    """
    if num_vars < 1:
        raise ValueError("num_vars must be >= 1")
    if num_vars > MAX_EXHAUSTIVE_VARS:
        raise ValueError(
            f"exhaustive enumeration is capped at {MAX_EXHAUSTIVE_VARS} variables "
            f"(got {num_vars}); use solve_tabu or solve_anneal instead"
        )
    t0 = time.perf_counter()
    total = 1 << num_vars
    weights = np.arange(num_vars)
    batch = getattr(objective, "value_batch", None)

    best_energy = np.inf
    best_index = 0
    for lo in range(0, total, _CHUNK):
        hi = min(lo + _CHUNK, total)
        if batch is not None:
            indices = np.arange(lo, hi, dtype=np.int64)
            B = ((indices[:, None] >> weights[None, :]) & 1).astype(np.float64)
            energies = np.asarray(batch(B), dtype=np.float64)
        else:
            energies = np.array(
                [objective(_decode(k, num_vars)) for k in range(lo, hi)]
            )
        pos = int(np.argmin(energies))  # first minimum == lowest index
        if energies[pos] < best_energy:
            best_energy = float(energies[pos])
            best_index = lo + pos

    bits = _decode(best_index, num_vars)
    return SolveResult(
        best_bits=bits,
        best_energy=float(objective(bits)),
        evaluations=total,
        wall_time=time.perf_counter() - t0,
        seed=seed,
    )
