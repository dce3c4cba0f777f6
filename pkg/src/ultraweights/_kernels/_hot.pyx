# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled hot-loop kernels; see pure.py for the reference semantics."""

import numpy as np

cimport numpy as cnp

cnp.import_array()

BACKEND = "compiled"


def lower_hull(y):
    cdef cnp.ndarray[cnp.float64_t, ndim=1] yy = np.ascontiguousarray(y, dtype=np.float64)
    cdef Py_ssize_t m = yy.shape[0]
    if m <= 2:
        return yy.copy()
    cdef cnp.ndarray[cnp.int64_t, ndim=1] hx = np.empty(m, dtype=np.int64)
    cdef Py_ssize_t top = 0, i
    cdef cnp.int64_t i0, i1
    for i in range(m):
        while top >= 2:
            i0 = hx[top - 2]
            i1 = hx[top - 1]
            if (yy[i1] - yy[i0]) * (i - i0) >= (yy[i] - yy[i0]) * (i1 - i0):
                top -= 1
            else:
                break
        hx[top] = i
        top += 1
    cdef cnp.ndarray[cnp.float64_t, ndim=1] out = np.empty(m, dtype=np.float64)
    cdef Py_ssize_t seg = 0
    cdef double x0, x1, y0v, y1v
    for i in range(m):
        while seg + 1 < top and hx[seg + 1] < i:
            seg += 1
        if hx[seg] == i or seg + 1 >= top:
            out[i] = yy[hx[seg]] if hx[seg] == i else yy[hx[top - 1]]
        else:
            x0 = hx[seg]; x1 = hx[seg + 1]
            y0v = yy[hx[seg]]; y1v = yy[hx[seg + 1]]
            out[i] = y0v + (y1v - y0v) * (i - x0) / (x1 - x0)
    return out


def min_chord(log_m, coef):
    cdef cnp.ndarray[cnp.float64_t, ndim=1] lm = np.ascontiguousarray(log_m, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] cf = np.ascontiguousarray(coef, dtype=np.float64)
    cdef Py_ssize_t n = lm.shape[0] - 1
    cdef cnp.ndarray[cnp.float64_t, ndim=1] out = np.zeros(n + 1, dtype=np.float64)
    cdef Py_ssize_t k, j
    cdef double c, best, v
    for k in range(1, n + 1):
        c = cf[k]
        best = k * c + lm[0]
        for j in range(1, k):
            v = (k - j) * c + lm[j]
            if v < best:
                best = v
            elif v > best:
                break
        out[k] = best
    return out


def sv_sup(log_mp, log_m, double log_s):
    cdef cnp.ndarray[cnp.float64_t, ndim=1] mp = np.ascontiguousarray(log_mp, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] lm = np.ascontiguousarray(log_m, dtype=np.float64)
    cdef Py_ssize_t n = mp.shape[0] - 1
    cdef cnp.ndarray[cnp.float64_t, ndim=1] out = np.full(n + 1, -np.inf, dtype=np.float64)
    cdef Py_ssize_t j, i
    cdef double top, best, v
    for j in range(1, n + 1):
        top = mp[j] - j * log_s
        best = (top - lm[0]) / j
        for i in range(1, j):
            v = (top - lm[i]) / (j - i)
            if v > best:
                best = v
        out[j] = best
    return out


def pair_gap_max(log_sum, log_parts):
    cdef cnp.ndarray[cnp.float64_t, ndim=1] ls = np.ascontiguousarray(log_sum, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] lp = np.ascontiguousarray(log_parts, dtype=np.float64)
    cdef Py_ssize_t n = ls.shape[0] - 1
    cdef cnp.ndarray[cnp.float64_t, ndim=1] gap = np.full(n + 1, -np.inf, dtype=np.float64)
    cdef cnp.ndarray[cnp.int64_t, ndim=1] argj = np.zeros(n + 1, dtype=np.int64)
    cdef Py_ssize_t m, j, jbest
    cdef double lo, v
    for m in range(2, n + 1):
        lo = lp[1] + lp[m - 1]
        jbest = 1
        for j in range(2, m):
            v = lp[j] + lp[m - j]
            if v < lo:
                lo = v
                jbest = j
        gap[m] = ls[m] - lo
        argj[m] = jbest
    return gap, argj


def assoc_sup(log_m, log_t):
    cdef cnp.ndarray[cnp.float64_t, ndim=1] lm = np.ascontiguousarray(log_m, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] lt = np.ascontiguousarray(np.atleast_1d(log_t), dtype=np.float64)
    cdef Py_ssize_t m = lm.shape[0], nt = lt.shape[0]
    cdef cnp.ndarray[cnp.float64_t, ndim=1] out = np.empty(nt, dtype=np.float64)
    cdef cnp.ndarray[cnp.int64_t, ndim=1] arg = np.zeros(nt, dtype=np.int64)
    cdef Py_ssize_t i, k, kb
    cdef double x, best, v
    for i in range(nt):
        x = lt[i]
        best = -lm[0]
        kb = 0
        for k in range(1, m):
            v = k * x - lm[k]
            if v > best:
                best = v
                kb = k
        out[i] = best
        arg[i] = kb
    return out, arg
