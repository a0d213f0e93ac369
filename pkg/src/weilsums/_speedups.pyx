# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled trace-histogram kernel; mirrors kernels._weil_histograms_numpy."""

import numpy as np

cimport numpy as cnp

cnp.import_array()


def weil_histograms(long long p, long long e, long long width, long long d,
                    const cnp.int64_t[::1] exp_packed,
                    const cnp.int64_t[::1] trace_table,
                    const cnp.int64_t[::1] tr_basis,
                    const cnp.int64_t[::1] spread_exp):
    cdef Py_ssize_t n = exp_packed.shape[0]
    counts_arr = np.zeros((n, p), dtype=np.int64)
    cdef cnp.int64_t[:, ::1] counts = counts_arr
    xd_arr = np.empty(n, dtype=np.int64)
    cdef cnp.int64_t[::1] xd = xd_arr
    cdef Py_ssize_t i, j, kk
    cdef long long s, acc, k, mask = ((<long long>1) << width) - 1
    for i in range(n):
        kk = <Py_ssize_t>((d * i) % n)
        if p == 2 or e == 1:
            xd[i] = exp_packed[kk]
        else:
            xd[i] = spread_exp[kk]
    with nogil:
        if p == 2:
            for j in range(n):
                counts[j, 0] += 1
                for i in range(n):
                    kk = i + j
                    if kk >= n:
                        kk -= n
                    counts[j, trace_table[xd[i] ^ exp_packed[kk]]] += 1
        elif e == 1:
            for j in range(n):
                counts[j, 0] += 1
                for i in range(n):
                    kk = i + j
                    if kk >= n:
                        kk -= n
                    s = xd[i] + exp_packed[kk]
                    if s >= p:
                        s -= p
                    counts[j, s] += 1
        else:
            for j in range(n):
                counts[j, 0] += 1
                for i in range(n):
                    kk = i + j
                    if kk >= n:
                        kk -= n
                    s = xd[i] + spread_exp[kk]
                    acc = 0
                    for k in range(e):
                        acc += ((s >> (width * k)) & mask) * tr_basis[k]
                    counts[j, acc % p] += 1
    return counts_arr
