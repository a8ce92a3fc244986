# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled numeric kernels: threshold sweep, weighted accumulation,
bootstrap resampling, and brute-force utility sums.

Signature-compatible with ``_pykernels``; sums use Kahan compensation so
results are stable to well below the tolerances the library promises.
"""

import numpy as np

cimport numpy as cnp

cnp.import_array()

BACKEND = "compiled"


def suffix_levels(scores_sorted, case_mass_sorted, control_mass_sorted):
    cdef const double[::1] s = np.ascontiguousarray(scores_sorted, dtype=np.float64)
    cdef const double[::1] cm = np.ascontiguousarray(case_mass_sorted, dtype=np.float64)
    cdef const double[::1] um = np.ascontiguousarray(control_mass_sorted, dtype=np.float64)
    cdef Py_ssize_t n = s.shape[0]
    if n == 0:
        z = np.zeros(1)
        return np.empty(0), z, z.copy()

    cdef Py_ssize_t k = 1
    cdef Py_ssize_t i
    for i in range(1, n):
        if s[i] != s[i - 1]:
            k += 1

    jumps_arr = np.empty(k, dtype=np.float64)
    tp_arr = np.empty(k + 1, dtype=np.float64)
    fp_arr = np.empty(k + 1, dtype=np.float64)
    cdef double[::1] jumps = jumps_arr
    cdef double[::1] tp = tp_arr
    cdef double[::1] fp = fp_arr

    # walk from the top score down, accumulating suffix mass with Kahan sums
    cdef double tp_acc = 0.0, tp_c = 0.0, fp_acc = 0.0, fp_c = 0.0
    cdef double yv, t
    cdef Py_ssize_t j = k
    tp[k] = 0.0
    fp[k] = 0.0
    i = n - 1
    while i >= 0:
        yv = cm[i] - tp_c
        t = tp_acc + yv
        tp_c = (t - tp_acc) - yv
        tp_acc = t
        yv = um[i] - fp_c
        t = fp_acc + yv
        fp_c = (t - fp_acc) - yv
        fp_acc = t
        if i == 0 or s[i - 1] != s[i]:
            j -= 1
            jumps[j] = s[i]
            tp[j] = tp_acc
            fp[j] = fp_acc
        i -= 1
    return jumps_arr, tp_arr, fp_arr


def weighted_score_sum(weights, outcomes, w1_at_scores, w0_at_scores):
    cdef const double[::1] w = np.ascontiguousarray(weights, dtype=np.float64)
    cdef const double[::1] y = np.ascontiguousarray(outcomes, dtype=np.float64)
    cdef const double[::1] w1 = np.ascontiguousarray(w1_at_scores, dtype=np.float64)
    cdef const double[::1] w0 = np.ascontiguousarray(w0_at_scores, dtype=np.float64)
    cdef Py_ssize_t n = w.shape[0]
    cdef double acc = 0.0, comp = 0.0, wacc = 0.0, wcomp = 0.0
    cdef double term, yv, t
    cdef Py_ssize_t i
    for i in range(n):
        term = w[i] * (y[i] * w1[i] - (1.0 - y[i]) * w0[i])
        yv = term - comp
        t = acc + yv
        comp = (t - acc) - yv
        acc = t
        yv = w[i] - wcomp
        t = wacc + yv
        wcomp = (t - wacc) - yv
        wacc = t
    return acc / wacc


def resample_ratio(contributions, weights, indices):
    cdef const double[::1] c = np.ascontiguousarray(contributions, dtype=np.float64)
    cdef const double[::1] w = np.ascontiguousarray(weights, dtype=np.float64)
    cdef const long long[:, ::1] idx = np.ascontiguousarray(indices, dtype=np.int64)
    cdef Py_ssize_t nb = idx.shape[0]
    cdef Py_ssize_t n = idx.shape[1]
    out_arr = np.empty(nb, dtype=np.float64)
    cdef double[::1] out = out_arr
    cdef double num, den, wi
    cdef Py_ssize_t b, i, j
    for b in range(nb):
        num = 0.0
        den = 0.0
        for i in range(n):
            j = <Py_ssize_t> idx[b, i]
            wi = w[j]
            num += wi * c[j]
            den += wi
        out[b] = num / den
    return out_arr


def brute_utility_sum(scores, thresholds, outcomes, weights, a, b, c, d):
    cdef const double[::1] f = np.ascontiguousarray(scores, dtype=np.float64)
    cdef const double[::1] ts = np.ascontiguousarray(thresholds, dtype=np.float64)
    cdef const double[::1] y = np.ascontiguousarray(outcomes, dtype=np.float64)
    cdef const double[::1] w = np.ascontiguousarray(weights, dtype=np.float64)
    cdef const double[::1] av = np.ascontiguousarray(a, dtype=np.float64)
    cdef const double[::1] bv = np.ascontiguousarray(b, dtype=np.float64)
    cdef const double[::1] cv = np.ascontiguousarray(c, dtype=np.float64)
    cdef const double[::1] dv = np.ascontiguousarray(d, dtype=np.float64)
    cdef Py_ssize_t n = f.shape[0]
    cdef double acc = 0.0, comp = 0.0
    cdef double payoff, yv, t
    cdef Py_ssize_t i
    for i in range(n):
        if f[i] > ts[i]:
            payoff = av[i] if y[i] != 0.0 else bv[i]
        else:
            payoff = cv[i] if y[i] != 0.0 else dv[i]
        payoff = w[i] * payoff
        yv = payoff - comp
        t = acc + yv
        comp = (t - acc) - yv
        acc = t
    return acc
