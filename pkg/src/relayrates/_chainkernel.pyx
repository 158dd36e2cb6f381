# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled inner loop for batch max-min decode-forward rate evaluation."""

from libc.math cimport log2, sqrt
from libc.stdint cimport int64_t

import numpy as np


def batch_min_rate(
    double[:, ::1] cands,
    int n_receivers,
    int[::1] grp_rcv,
    signed char[::1] grp_kind,
    int64_t[::1] grp_ptr,
    double[::1] ent_const,
    int[::1] ent_col,
    double[::1] noise,
    bint coherent,
    double[::1] out,
):
    cdef Py_ssize_t n = cands.shape[0]
    cdef Py_ssize_t n_groups = grp_rcv.shape[0]
    cdef Py_ssize_t c, g, e
    cdef int64_t lo, hi
    cdef int r
    cdef double amp, pwr, term, rate, best

    acc = np.empty((2, n_receivers), dtype=np.float64)
    cdef double[:, ::1] accv = acc

    for c in range(n):
        for r in range(n_receivers):
            accv[0, r] = 0.0
            accv[1, r] = 0.0
        for g in range(n_groups):
            lo = grp_ptr[g]
            hi = grp_ptr[g + 1]
            if coherent:
                amp = 0.0
                for e in range(lo, hi):
                    amp += sqrt(ent_const[e] * cands[c, ent_col[e]])
                term = amp * amp
            else:
                pwr = 0.0
                for e in range(lo, hi):
                    pwr += ent_const[e] * cands[c, ent_col[e]]
                term = pwr
            accv[grp_kind[g], grp_rcv[g]] += term
        best = 1e300
        for r in range(n_receivers):
            rate = 0.5 * log2(1.0 + accv[0, r] / (noise[r] + accv[1, r]))
            if rate < best:
                best = rate
        out[c] = best
