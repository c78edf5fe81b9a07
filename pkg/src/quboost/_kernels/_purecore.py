"""Pure numpy fallback for the hot solver kernels.

This module and the compiled ``_fastcore`` extension implement the same
algorithms with the same random stream (SplitMix64) and the same
floating-point operation order, so for a given seed both backends return
identical results. Keep any change here in lockstep with ``_fastcore.pyx``.
"""

from __future__ import annotations

import math

import numpy as np

BACKEND = "pure"

_MASK64 = (1 << 64) - 1
_INV_2_53 = 1.0 / 9007199254740992.0  # 2**-53


class SplitMix64:
    """Deterministic 64-bit generator shared by both kernel backends."""

    __slots__ = ("state",)

    def __init__(self, seed: int):
        self.state = seed & _MASK64

    def next_uint64(self) -> int:
        self.state = (self.state + 0x9E3779B97F4A7C15) & _MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
        return z ^ (z >> 31)

    def next_double(self) -> float:
        return (self.next_uint64() >> 11) * _INV_2_53

    def next_below(self, n: int) -> int:
        return self.next_uint64() % n


def _random_bits(rng: SplitMix64, num_vars: int) -> np.ndarray:
    x = np.empty(num_vars, dtype=np.uint8)
    for k in range(num_vars):
        x[k] = rng.next_below(2)
    return x


def _init_qubo_state(Q: np.ndarray, x: np.ndarray):
    """Energy and field vector f_j = sum_k Q[j, k] x_k, built by inserting
    set bits in ascending index order (the compiled kernel does the same,
    so the floats agree bit for bit)."""
    V = Q.shape[0]
    f = np.zeros(V)
    energy = 0.0
    for k in range(V):
        if x[k]:
            energy += Q[k, k] + 2.0 * f[k]
            f += Q[k]
    return f, energy


def _flip_delta(Q: np.ndarray, x: np.ndarray, f: np.ndarray, j: int) -> float:
    if x[j] == 0:
        return Q[j, j] + 2.0 * f[j]
    return Q[j, j] - 2.0 * f[j]


def _apply_flip(Q, x, f, j):
    if x[j] == 0:
        x[j] = 1
        f += Q[j]
    else:
        x[j] = 0
        f -= Q[j]


def _bits_less(a: np.ndarray, b: np.ndarray) -> bool:
    """Compare bit vectors as unsigned integers with bit k weighing 2**k."""
    for k in range(a.shape[0] - 1, -1, -1):
        if a[k] != b[k]:
            return a[k] < b[k]
    return False


def tabu_qubo(Q, num_starts, tenure, max_iter, seed, aspiration, collect_trace):
    """Multi-start tabu search on a symmetric QUBO matrix.

    Per start: random initial bits from ``seed ^ start_index``, steepest
    admissible single-bit flips with O(1) delta bookkeeping, a flipped
    variable stays tabu for ``tenure`` iterations, and (optionally) tabu is
    overridden whenever a move beats the start's best. Starts are merged
    with an (energy, bit-vector value) tie-break, so the result does not
    depend on any execution order.
    """
    Q = np.ascontiguousarray(Q, dtype=np.float64)
    V = Q.shape[0]
    diag = np.ascontiguousarray(np.diag(Q))

    best_bits = None
    best_energy = math.inf
    evaluations = 0
    trace = [] if collect_trace else None

    for start in range(num_starts):
        rng = SplitMix64((seed ^ start) & _MASK64)
        x = _random_bits(rng, V)
        f, energy = _init_qubo_state(Q, x)
        evaluations += 1
        start_best = energy
        start_best_bits = x.copy()
        tabu_until = np.zeros(V, dtype=np.int64)
        if collect_trace:
            trace.append(start_best if best_energy > start_best else best_energy)

        for it in range(1, max_iter + 1):
            deltas = np.where(x == 0, diag + 2.0 * f, diag - 2.0 * f)
            evaluations += V
            admissible = tabu_until < it
            if aspiration:
                admissible = admissible | (energy + deltas < start_best)
            masked = np.where(admissible, deltas, np.inf)
            j = int(np.argmin(masked))
            if not admissible[j]:  # every move tabu: fall back to steepest
                j = int(np.argmin(deltas))
            energy += float(deltas[j])
            _apply_flip(Q, x, f, j)
            tabu_until[j] = it + tenure
            if energy < start_best:
                start_best = energy
                start_best_bits = x.copy()
            if collect_trace:
                trace.append(min(start_best, best_energy))

        if (best_bits is None or start_best < best_energy
                or (start_best == best_energy
                    and _bits_less(start_best_bits, best_bits))):
            best_energy = start_best
            best_bits = start_best_bits

    trace_arr = np.minimum.accumulate(np.array(trace)) if collect_trace else None
    return best_bits, best_energy, evaluations, trace_arr


def anneal_qubo(Q, t_initial, cooling, steps_per_t, t_final, seed, collect_trace):
    """Single-bit-flip Metropolis annealing on a QUBO matrix with an
    exponential cooling schedule (T *= cooling after each batch)."""
    Q = np.ascontiguousarray(Q, dtype=np.float64)
    V = Q.shape[0]
    rng = SplitMix64(seed & _MASK64)
    x = _random_bits(rng, V)
    f, energy = _init_qubo_state(Q, x)
    evaluations = 1
    best_energy = energy
    best_bits = x.copy()
    trace = [best_energy] if collect_trace else None

    T = t_initial
    while T >= t_final:
        for _ in range(steps_per_t):
            j = rng.next_below(V)
            d = _flip_delta(Q, x, f, j)
            evaluations += 1
            accept = d <= 0.0 or rng.next_double() < math.exp(-d / T)
            if accept:
                energy += d
                _apply_flip(Q, x, f, j)
                if energy < best_energy:
                    best_energy = energy
                    best_bits = x.copy()
            if collect_trace:
                trace.append(best_energy)
        T *= cooling

    trace_arr = np.array(trace) if collect_trace else None
    return best_bits, best_energy, evaluations, trace_arr


def anneal_zero_one(H, y, lam, coeff, t_initial, cooling, steps_per_t, t_final,
                    seed, collect_trace):
    """Metropolis annealing of the regularized 0-1 loss over weight bits.

    ``H`` holds unit-scale stump responses (S, N), ``coeff`` the fixed-point
    bit values, so variable i*d+b toggles ``coeff[b]`` on weight i. The
    error count treats a zero margin as a mistake. Energies are recomputed
    from the integer error/support counts after every acceptance, so no
    floating-point drift accumulates.
    """
    H = np.ascontiguousarray(H, dtype=np.float64)
    y = np.ascontiguousarray(y, dtype=np.float64)
    coeff = np.ascontiguousarray(coeff, dtype=np.float64)
    S, N = H.shape
    d = coeff.shape[0]
    V = N * d
    rng = SplitMix64(seed & _MASK64)

    x = _random_bits(rng, V)
    bitsum = np.zeros(N, dtype=np.int64)
    margins = np.zeros(S)
    for v in range(V):
        if x[v]:
            i, b = divmod(v, d)
            bitsum[i] += 1 << b
            margins += coeff[b] * H[:, i]
    errors = int(np.count_nonzero(y * margins <= 0.0))
    support = int(np.count_nonzero(bitsum > 0))
    energy = errors + lam * support
    evaluations = 1

    best_energy = energy
    best_bits = x.copy()
    trace = [best_energy] if collect_trace else None
    scratch = np.empty(S)

    T = t_initial
    while T >= t_final:
        for _ in range(steps_per_t):
            v = rng.next_below(V)
            i, b = divmod(v, d)
            step = -coeff[b] if x[v] else coeff[b]
            np.multiply(H[:, i], step, out=scratch)
            scratch += margins
            new_errors = int(np.count_nonzero(y * scratch <= 0.0))
            new_bitsum = bitsum[i] - (1 << b) if x[v] else bitsum[i] + (1 << b)
            new_support = support - (bitsum[i] > 0) + (new_bitsum > 0)
            delta = (new_errors - errors) + lam * (new_support - support)
            evaluations += 1
            accept = delta <= 0.0 or rng.next_double() < math.exp(-delta / T)
            if accept:
                x[v] ^= 1
                bitsum[i] = new_bitsum
                margins, scratch = scratch, margins
                errors = new_errors
                support = new_support
                energy = errors + lam * support
                if energy < best_energy:
                    best_energy = energy
                    best_bits = x.copy()
            if collect_trace:
                trace.append(best_energy)
        T *= cooling

    trace_arr = np.array(trace) if collect_trace else None
    return best_bits, best_energy, evaluations, trace_arr
