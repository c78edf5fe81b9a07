# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled twin of ``_purecore``: same algorithms, same SplitMix64 stream,
same floating-point operation order, so both backends return identical
results for a given seed. Keep in lockstep with ``_purecore.py``."""

from libc.math cimport exp, INFINITY

import numpy as np
cimport numpy as cnp

cnp.import_array()

BACKEND = "compiled"

ctypedef unsigned long long u64


cdef inline u64 _next_uint64(u64 *state) nogil:
    state[0] += <u64>0x9E3779B97F4A7C15ULL
    cdef u64 z = state[0]
    z = (z ^ (z >> 30)) * <u64>0xBF58476D1CE4E5B9ULL
    z = (z ^ (z >> 27)) * <u64>0x94D049BB133111EBULL
    return z ^ (z >> 31)


cdef inline double _next_double(u64 *state) nogil:
    return <double>(_next_uint64(state) >> 11) * (1.0 / 9007199254740992.0)


cdef inline u64 _next_below(u64 *state, u64 n) nogil:
    return _next_uint64(state) % n


cdef void _random_bits(u64 *state, unsigned char[::1] x) nogil:
    cdef Py_ssize_t k
    for k in range(x.shape[0]):
        x[k] = <unsigned char>_next_below(state, 2)


cdef double _init_qubo_state(const double[:, ::1] Q, unsigned char[::1] x,
                             double[::1] f) nogil:
    # insert set bits in ascending index order (matches the fallback)
    cdef Py_ssize_t V = Q.shape[0]
    cdef Py_ssize_t k, j
    cdef double energy = 0.0
    for k in range(V):
        f[k] = 0.0
    for k in range(V):
        if x[k]:
            energy += Q[k, k] + 2.0 * f[k]
            for j in range(V):
                f[j] += Q[k, j]
    return energy


cdef inline double _flip_delta(const double[:, ::1] Q, unsigned char[::1] x,
                               double[::1] f, Py_ssize_t j) nogil:
    if x[j] == 0:
        return Q[j, j] + 2.0 * f[j]
    return Q[j, j] - 2.0 * f[j]


cdef inline void _apply_flip(const double[:, ::1] Q, unsigned char[::1] x,
                             double[::1] f, Py_ssize_t j) nogil:
    cdef Py_ssize_t k
    if x[j] == 0:
        x[j] = 1
        for k in range(Q.shape[0]):
            f[k] += Q[j, k]
    else:
        x[j] = 0
        for k in range(Q.shape[0]):
            f[k] -= Q[j, k]


cdef bint _bits_less(unsigned char[::1] a, unsigned char[::1] b) nogil:
    cdef Py_ssize_t k
    for k in range(a.shape[0] - 1, -1, -1):
        if a[k] != b[k]:
            return a[k] < b[k]
    return False


def tabu_qubo(Q, num_starts, tenure, max_iter, seed, aspiration, collect_trace):
    cdef cnp.ndarray[double, ndim=2, mode="c"] Qc = \
        np.ascontiguousarray(Q, dtype=np.float64)
    cdef const double[:, ::1] Qv = Qc
    cdef Py_ssize_t V = Qv.shape[0]
    cdef Py_ssize_t n_starts = num_starts
    cdef long long ten = tenure
    cdef long long iters = max_iter
    cdef u64 base_seed = <u64>(seed & 0xFFFFFFFFFFFFFFFF)
    cdef bint asp = 1 if aspiration else 0
    cdef bint want_trace = 1 if collect_trace else 0

    x_arr = np.empty(V, dtype=np.uint8)
    f_arr = np.empty(V, dtype=np.float64)
    sbest_arr = np.empty(V, dtype=np.uint8)
    best_arr = np.empty(V, dtype=np.uint8)
    cdef unsigned char[::1] x = x_arr
    cdef double[::1] f = f_arr
    cdef unsigned char[::1] sbest = sbest_arr
    cdef unsigned char[::1] best = best_arr
    tabu_arr = np.zeros(V, dtype=np.int64)
    cdef cnp.int64_t[::1] tabu_until = tabu_arr

    trace_list = [] if want_trace else None
    cdef double best_energy = INFINITY
    cdef bint have_best = 0
    cdef long long evaluations = 0
    cdef double energy, start_best, d, best_d, best_adm_d, cur
    cdef Py_ssize_t start, j, pick, pick_any, k
    cdef long long it
    cdef u64 state
    cdef bint adm

    for start in range(n_starts):
        state = base_seed ^ <u64>start
        _random_bits(&state, x)
        energy = _init_qubo_state(Qv, x, f)
        evaluations += 1
        start_best = energy
        for k in range(V):
            sbest[k] = x[k]
        for k in range(V):
            tabu_until[k] = 0
        if want_trace:
            trace_list.append(start_best if start_best < best_energy else best_energy)

        for it in range(1, iters + 1):
            pick = -1
            pick_any = -1
            best_adm_d = INFINITY
            best_d = INFINITY
            for j in range(V):
                d = _flip_delta(Qv, x, f, j)
                adm = tabu_until[j] < it
                if asp and not adm and energy + d < start_best:
                    adm = 1
                if adm and d < best_adm_d:
                    best_adm_d = d
                    pick = j
                if d < best_d:
                    best_d = d
                    pick_any = j
            evaluations += V
            if pick < 0:  # every move tabu: fall back to steepest
                pick = pick_any
                best_adm_d = best_d
            energy += best_adm_d
            _apply_flip(Qv, x, f, pick)
            tabu_until[pick] = it + ten
            if energy < start_best:
                start_best = energy
                for k in range(V):
                    sbest[k] = x[k]
            if want_trace:
                trace_list.append(start_best if start_best < best_energy
                                  else best_energy)

        if (not have_best or start_best < best_energy
                or (start_best == best_energy and _bits_less(sbest, best))):
            best_energy = start_best
            have_best = 1
            for k in range(V):
                best[k] = sbest[k]

    if want_trace:
        trace_arr = np.minimum.accumulate(np.array(trace_list))
    else:
        trace_arr = None
    return best_arr, best_energy, int(evaluations), trace_arr


def anneal_qubo(Q, t_initial, cooling, steps_per_t, t_final, seed, collect_trace):
    cdef cnp.ndarray[double, ndim=2, mode="c"] Qc = \
        np.ascontiguousarray(Q, dtype=np.float64)
    cdef const double[:, ::1] Qv = Qc
    cdef Py_ssize_t V = Qv.shape[0]
    cdef u64 state = <u64>(seed & 0xFFFFFFFFFFFFFFFF)
    cdef double T = t_initial
    cdef double cool = cooling
    cdef double Tfinal = t_final
    cdef long long steps = steps_per_t
    cdef bint want_trace = 1 if collect_trace else 0

    x_arr = np.empty(V, dtype=np.uint8)
    f_arr = np.empty(V, dtype=np.float64)
    best_arr = np.empty(V, dtype=np.uint8)
    cdef unsigned char[::1] x = x_arr
    cdef double[::1] f = f_arr
    cdef unsigned char[::1] best = best_arr

    _random_bits(&state, x)
    cdef double energy = _init_qubo_state(Qv, x, f)
    cdef long long evaluations = 1
    cdef double best_energy = energy
    cdef Py_ssize_t k, j
    for k in range(V):
        best[k] = x[k]
    trace_list = [best_energy] if want_trace else None

    cdef double d
    cdef long long step
    cdef bint accept
    while T >= Tfinal:
        for step in range(steps):
            j = <Py_ssize_t>_next_below(&state, <u64>V)
            d = _flip_delta(Qv, x, f, j)
            evaluations += 1
            accept = d <= 0.0
            if not accept:
                accept = _next_double(&state) < exp(-d / T)
            if accept:
                energy += d
                _apply_flip(Qv, x, f, j)
                if energy < best_energy:
                    best_energy = energy
                    for k in range(V):
                        best[k] = x[k]
            if want_trace:
                trace_list.append(best_energy)
        T *= cool

    trace_arr = np.array(trace_list) if want_trace else None
    return best_arr, best_energy, int(evaluations), trace_arr


def anneal_zero_one(H, y, lam, coeff, t_initial, cooling, steps_per_t, t_final,
                    seed, collect_trace):
    cdef cnp.ndarray[double, ndim=2, mode="c"] Hc = \
        np.ascontiguousarray(H, dtype=np.float64)
    cdef cnp.ndarray[double, ndim=1, mode="c"] yc = \
        np.ascontiguousarray(y, dtype=np.float64)
    cdef cnp.ndarray[double, ndim=1, mode="c"] cc = \
        np.ascontiguousarray(coeff, dtype=np.float64)
    cdef const double[:, ::1] Hv = Hc
    cdef const double[::1] yv = yc
    cdef const double[::1] cv = cc
    cdef Py_ssize_t S = Hv.shape[0]
    cdef Py_ssize_t N = Hv.shape[1]
    cdef Py_ssize_t d = cv.shape[0]
    cdef Py_ssize_t V = N * d
    cdef double lam_c = lam
    cdef u64 state = <u64>(seed & 0xFFFFFFFFFFFFFFFF)
    cdef double T = t_initial
    cdef double cool = cooling
    cdef double Tfinal = t_final
    cdef long long steps = steps_per_t
    cdef bint want_trace = 1 if collect_trace else 0

    x_arr = np.empty(V, dtype=np.uint8)
    best_arr = np.empty(V, dtype=np.uint8)
    bitsum_arr = np.zeros(N, dtype=np.int64)
    margins_arr = np.zeros(S, dtype=np.float64)
    scratch_arr = np.empty(S, dtype=np.float64)
    cdef unsigned char[::1] x = x_arr
    cdef unsigned char[::1] best = best_arr
    cdef cnp.int64_t[::1] bitsum = bitsum_arr
    cdef double[::1] margins = margins_arr
    cdef double[::1] scratch = scratch_arr

    cdef Py_ssize_t v, i, b, s, k
    cdef double step_val
    _random_bits(&state, x)
    for v in range(V):
        if x[v]:
            i = v // d
            b = v - i * d
            bitsum[i] += (<long long>1) << b
            step_val = cv[b]
            for s in range(S):
                margins[s] += step_val * Hv[s, i]

    cdef long long errors = 0
    for s in range(S):
        if yv[s] * margins[s] <= 0.0:
            errors += 1
    cdef long long support = 0
    for i in range(N):
        if bitsum[i] > 0:
            support += 1
    cdef double energy = errors + lam_c * support
    cdef long long evaluations = 1
    cdef double best_energy = energy
    for v in range(V):
        best[v] = x[v]
    trace_list = [best_energy] if want_trace else None

    cdef long long new_errors, new_bitsum, new_support
    cdef double delta
    cdef long long step
    cdef bint accept
    cdef double[::1] tmp
    while T >= Tfinal:
        for step in range(steps):
            v = <Py_ssize_t>_next_below(&state, <u64>V)
            i = v // d
            b = v - i * d
            step_val = -cv[b] if x[v] else cv[b]
            new_errors = 0
            for s in range(S):
                scratch[s] = step_val * Hv[s, i] + margins[s]
                if yv[s] * scratch[s] <= 0.0:
                    new_errors += 1
            if x[v]:
                new_bitsum = bitsum[i] - ((<long long>1) << b)
            else:
                new_bitsum = bitsum[i] + ((<long long>1) << b)
            new_support = support
            if bitsum[i] > 0:
                new_support -= 1
            if new_bitsum > 0:
                new_support += 1
            delta = <double>(new_errors - errors) + lam_c * <double>(new_support - support)
            evaluations += 1
            accept = delta <= 0.0
            if not accept:
                accept = _next_double(&state) < exp(-delta / T)
            if accept:
                x[v] ^= 1
                bitsum[i] = new_bitsum
                tmp = margins
                margins = scratch
                scratch = tmp
                errors = new_errors
                support = new_support
                energy = errors + lam_c * support
                if energy < best_energy:
                    best_energy = energy
                    for k in range(V):
                        best[k] = x[k]
            if want_trace:
                trace_list.append(best_energy)
        T *= cool

    trace_arr = np.array(trace_list) if want_trace else None
    return best_arr, best_energy, int(evaluations), trace_arr
