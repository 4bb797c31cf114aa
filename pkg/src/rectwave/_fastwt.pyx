# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled kernels for the 1D filter-bank steps.

Mirrors rectwave._kernels_np exactly (same tap accumulation order, same
boundary conventions, bit-identical outputs); see that module for the
conventions.  Boundary index folding is only evaluated near the edges;
the interior runs without index arithmetic.
"""

import numpy as np

from libc.math cimport sqrt

cdef double INV_SQRT2 = 1.0 / sqrt(2.0)


cdef inline Py_ssize_t imod(Py_ssize_t i, Py_ssize_t n) nogil:
    cdef Py_ssize_t r = i % n
    return r + n if r < 0 else r


cdef inline Py_ssize_t fold_signal(Py_ssize_t i, Py_ssize_t n) nogil:
    cdef Py_ssize_t period = 2 * n - 2
    cdef Py_ssize_t u
    if n <= 1:
        return 0
    u = imod(i, period)
    return period - u if u >= n else u


cdef inline Py_ssize_t fold_subband(Py_ssize_t j, Py_ssize_t m, int c, int sign,
                                    double* scale) nogil:
    # reflections about -c/2 and (2m-1-c)/2; antisymmetric filters flip sign
    cdef int flips = 0
    while j < 0 or j >= m:
        if j < 0:
            j = -c - j
        else:
            j = (2 * m - 1 - c) - j
        flips += 1
    if sign < 0 and (flips & 1):
        scale[0] = -1.0
    else:
        scale[0] = 1.0
    return j


cdef void _analysis_channel(const double[:, ::1] x, double[:, ::1] out,
                            const double[::1] taps, Py_ssize_t start,
                            bint sym) nogil:
    cdef Py_ssize_t rows = x.shape[0]
    cdef Py_ssize_t n = x.shape[1]
    cdef Py_ssize_t half = n // 2
    cdef Py_ssize_t nt = taps.shape[0]
    cdef Py_ssize_t r, i, t, k, i_lo, i_hi
    cdef double acc
    # window [2i+start, 2i+start+nt) stays inside [0, n) for i in [i_lo, i_hi)
    i_lo = 0
    while i_lo < half and 2 * i_lo + start < 0:
        i_lo += 1
    i_hi = half
    while i_hi > i_lo and 2 * (i_hi - 1) + start + nt - 1 >= n:
        i_hi -= 1
    for r in range(rows):
        for i in range(i_lo):
            acc = 0.0
            for t in range(nt):
                k = 2 * i + start + t
                acc += taps[t] * x[r, fold_signal(k, n) if sym else imod(k, n)]
            out[r, i] = acc * INV_SQRT2
        for i in range(i_lo, i_hi):
            acc = 0.0
            k = 2 * i + start
            for t in range(nt):
                acc += taps[t] * x[r, k + t]
            out[r, i] = acc * INV_SQRT2
        for i in range(i_hi, half):
            acc = 0.0
            for t in range(nt):
                k = 2 * i + start + t
                acc += taps[t] * x[r, fold_signal(k, n) if sym else imod(k, n)]
            out[r, i] = acc * INV_SQRT2


def analysis_rows(x, lo, lo_start, hi, hi_start, symmetric):
    """One analysis step applied to every row of x (shape (rows, n), n even)."""
    cdef const double[:, ::1] xv = x
    cdef const double[::1] lov = lo
    cdef const double[::1] hiv = hi
    cdef Py_ssize_t rows = xv.shape[0]
    cdef Py_ssize_t half = xv.shape[1] // 2
    cdef bint sym = symmetric
    cdef Py_ssize_t ls = lo_start
    cdef Py_ssize_t hs = hi_start
    a = np.empty((rows, half))
    d = np.empty((rows, half))
    cdef double[:, ::1] av = a
    cdef double[:, ::1] dv = d
    with nogil:
        _analysis_channel(xv, av, lov, ls, sym)
        _analysis_channel(xv, dv, hiv, hs, sym)
    return a, d


cdef inline double _gather_edge(double acc, const double[:, ::1] sub, Py_ssize_t r,
                                const double[::1] taps, Py_ssize_t start,
                                Py_ssize_t i, bint sym, int c, int s) nogil:
    cdef Py_ssize_t m = sub.shape[1]
    cdef Py_ssize_t nt = taps.shape[0]
    cdef Py_ssize_t t0 = imod(i - start, 2)
    cdef Py_ssize_t t, j
    cdef double scale
    for t in range(t0, nt, 2):
        j = (i - start - t) // 2
        if sym:
            j = fold_subband(j, m, c, s, &scale)
            acc += taps[t] * sub[r, j] * scale
        else:
            acc += taps[t] * sub[r, imod(j, m)]
    return acc


cdef void _synthesis_sum(const double[:, ::1] a, const double[:, ::1] d,
                         double[:, ::1] out,
                         const double[::1] lo, Py_ssize_t ls,
                         const double[::1] hi, Py_ssize_t hs,
                         bint sym, int ca, int cd, int sa, int sd) nogil:
    cdef Py_ssize_t rows = a.shape[0]
    cdef Py_ssize_t m = a.shape[1]
    cdef Py_ssize_t n = 2 * m
    cdef Py_ssize_t nlo = lo.shape[0]
    cdef Py_ssize_t nhi = hi.shape[0]
    cdef Py_ssize_t r, i, t, j, t0
    cdef Py_ssize_t lo_i0, lo_i1, hi_i0, hi_i1, i_lo, i_hi
    cdef double acc
    # contributing j = (i - start - t)/2 stays inside [0, m) for interior i
    lo_i0 = ls + nlo - 1
    lo_i1 = 2 * m - 1 + ls
    hi_i0 = hs + nhi - 1
    hi_i1 = 2 * m - 1 + hs
    i_lo = max(0, max(lo_i0, hi_i0))
    if i_lo > n:
        i_lo = n
    i_hi = min(n, min(lo_i1, hi_i1) + 1)
    if i_hi < i_lo:
        i_hi = i_lo
    for r in range(rows):
        for i in range(0, i_lo):
            acc = _gather_edge(0.0, a, r, lo, ls, i, sym, ca, sa)
            acc = _gather_edge(acc, d, r, hi, hs, i, sym, cd, sd)
            out[r, i] = acc * INV_SQRT2
        for i in range(i_lo, i_hi):
            acc = 0.0
            t0 = imod(i - ls, 2)
            for t in range(t0, nlo, 2):
                acc += lo[t] * a[r, (i - ls - t) // 2]
            t0 = imod(i - hs, 2)
            for t in range(t0, nhi, 2):
                acc += hi[t] * d[r, (i - hs - t) // 2]
            out[r, i] = acc * INV_SQRT2
        for i in range(i_hi, n):
            acc = _gather_edge(0.0, a, r, lo, ls, i, sym, ca, sa)
            acc = _gather_edge(acc, d, r, hi, hs, i, sym, cd, sd)
            out[r, i] = acc * INV_SQRT2


def synthesis_rows(a, d, lo, lo_start, hi, hi_start, symmetric, ca, cd, sa, sd):
    """One synthesis step on every row; returns shape (rows, 2*m)."""
    cdef const double[:, ::1] av = a
    cdef const double[:, ::1] dv = d
    cdef const double[::1] lov = lo
    cdef const double[::1] hiv = hi
    cdef Py_ssize_t rows = av.shape[0]
    cdef Py_ssize_t n = 2 * av.shape[1]
    cdef bint sym = symmetric
    cdef Py_ssize_t ls = lo_start
    cdef Py_ssize_t hs = hi_start
    cdef int cav = ca, cdv = cd, sav = sa, sdv = sd
    out = np.empty((rows, n))
    cdef double[:, ::1] ov = out
    with nogil:
        _synthesis_sum(av, dv, ov, lov, ls, hiv, hs, sym, cav, cdv, sav, sdv)
    return out
