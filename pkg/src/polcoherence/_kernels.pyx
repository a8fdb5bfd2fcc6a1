# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot loops.  Same contracts as ``_kernels_py``."""

import numpy as np
from libc.math cimport cos


def cos_sum(const double[::1] eta, double offset):
    cdef Py_ssize_t i, n = eta.shape[0]
    cdef double acc = 0.0
    with nogil:
        for i in range(n):
            acc += cos(offset + eta[i])
    return acc


def singles_moments(const double[::1] eta, double offset,
                    double s_upper, double s_lower, double i0):
    cdef Py_ssize_t i, n = eta.shape[0]
    cdef double half = 0.5 * i0
    cdef double c, ia, ib, ic, id_, d
    cdef double sa = 0, sb = 0, sc = 0, sd = 0
    cdef double qa = 0, qb = 0, qc = 0, qd = 0
    with nogil:
        for i in range(n):
            c = cos(offset + eta[i])
            ia = half * (1.0 + s_upper * c)
            ib = half * (1.0 + s_lower * c)
            ic = half * (1.0 - s_upper * c)
            id_ = half * (1.0 - s_lower * c)
            d = ia - half
            sa += d
            qa += d * d
            d = ib - half
            sb += d
            qb += d * d
            d = ic - half
            sc += d
            qc += d * d
            d = id_ - half
            sd += d
            qd += d * d
    return np.array([sa, sb, sc, sd]), np.array([qa, qb, qc, qd])


def tally(const double[::1] u, const double[::1] cum):
    cdef Py_ssize_t i, k, n = u.shape[0], m = cum.shape[0]
    counts = np.zeros(m, dtype=np.int64)
    cdef long long[::1] cv = counts
    cdef double x
    with nogil:
        for i in range(n):
            x = u[i]
            k = 0
            while k < m - 1 and x >= cum[k]:
                k += 1
            cv[k] += 1
    return counts
