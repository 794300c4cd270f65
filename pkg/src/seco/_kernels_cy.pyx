# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled versions of the hot compression kernels.

Same contracts as seco._kernels_py: float32 storage in, float64
accumulation, clamped cosines.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport exp, sqrt

cnp.import_array()

cdef double EPS_NORM = 1e-12


def cosine_matrix(const cnp.float32_t[:, :] a, const cnp.float32_t[:, :] b):
    # the gram matrix goes through BLAS; norms and clamping stay in C
    cdef Py_ssize_t m = a.shape[0], n = b.shape[0], d = a.shape[1]
    cdef cnp.ndarray[cnp.float64_t, ndim=2] a64 = np.asarray(a, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=2] b64 = np.asarray(b, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=2] out = a64 @ b64.T
    cdef cnp.ndarray[cnp.float64_t, ndim=1] na = np.empty(m, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] nb = np.empty(n, dtype=np.float64)
    cdef double[:, :] out_v = out
    cdef double[:] na_v = na, nb_v = nb
    cdef Py_ssize_t i, j, t
    cdef double acc, c

    with nogil:
        for i in range(m):
            acc = 0.0
            for t in range(d):
                acc += <double> a[i, t] * <double> a[i, t]
            na_v[i] = sqrt(acc)
        for j in range(n):
            acc = 0.0
            for t in range(d):
                acc += <double> b[j, t] * <double> b[j, t]
            nb_v[j] = sqrt(acc)
        for i in range(m):
            for j in range(n):
                c = out_v[i, j] / (na_v[i] * nb_v[j] + EPS_NORM)
                if c > 1.0:
                    c = 1.0
                elif c < -1.0:
                    c = -1.0
                out_v[i, j] = c
    return out


def relevance_kernel(const cnp.float32_t[:, :] context, q_bar):
    cdef cnp.ndarray[cnp.float64_t, ndim=1] q = np.ascontiguousarray(q_bar, dtype=np.float64)
    cdef double[:] q_v = q
    cdef Py_ssize_t n = context.shape[0], d = context.shape[1]
    cdef cnp.ndarray[cnp.float64_t, ndim=1] out = np.empty(n, dtype=np.float64)
    cdef double[:] out_v = out
    cdef Py_ssize_t i, t
    cdef double acc, nq, c

    acc = 0.0
    for t in range(d):
        acc += q_v[t] * q_v[t]
    nq = sqrt(acc)
    with nogil:
        for i in range(n):
            acc = 0.0
            for t in range(d):
                acc += <double> context[i, t] * <double> context[i, t]
            c = 0.0
            for t in range(d):
                c += <double> context[i, t] * q_v[t]
            c = c / (sqrt(acc) * nq + EPS_NORM)
            if c > 1.0:
                c = 1.0
            elif c < -1.0:
                c = -1.0
            out_v[i] = c
    return out


def merge_kernel(const cnp.float32_t[:, :] context, group_of, weights, Py_ssize_t n_groups):
    cdef cnp.ndarray[cnp.int64_t, ndim=1] g = np.ascontiguousarray(group_of, dtype=np.int64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] w = np.ascontiguousarray(weights, dtype=np.float64)
    cdef Py_ssize_t n = context.shape[0], d = context.shape[1]
    cdef cnp.ndarray[cnp.float64_t, ndim=2] merged = np.zeros((n_groups, d), dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] alpha = np.full(n, np.nan, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] wmax = np.full(n_groups, -np.inf, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] esum = np.zeros(n_groups, dtype=np.float64)
    cdef double[:, :] merged_v = merged
    cdef double[:] alpha_v = alpha, w_v = w, wmax_v = wmax, esum_v = esum
    cdef cnp.int64_t[:] g_v = g
    cdef Py_ssize_t i, t
    cdef cnp.int64_t k
    cdef double a

    with nogil:
        for i in range(n):
            k = g_v[i]
            if k >= 0 and w_v[i] > wmax_v[k]:
                wmax_v[k] = w_v[i]
        for i in range(n):
            k = g_v[i]
            if k >= 0:
                esum_v[k] += exp(w_v[i] - wmax_v[k])
        for i in range(n):
            k = g_v[i]
            if k >= 0:
                a = exp(w_v[i] - wmax_v[k]) / esum_v[k]
                alpha_v[i] = a
                for t in range(d):
                    merged_v[k, t] += a * <double> context[i, t]
    return merged, alpha
