# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled inner loops. Signatures mirror :mod:`maspitch._kernels_py`."""

import numpy as np

cimport numpy as cnp
from cython.parallel cimport prange

cnp.import_array()


def cqt_power(const double[::1] x,
              const double[::1] kern_re,
              const double[::1] kern_im,
              const Py_ssize_t[::1] offsets,
              const Py_ssize_t[::1] lengths,
              Py_ssize_t hop,
              Py_ssize_t n_frames,
              int n_threads=1):
    cdef Py_ssize_t n_bins = offsets.shape[0]
    cdef Py_ssize_t n_x = x.shape[0]
    out_arr = np.zeros((n_frames, n_bins), dtype=np.float64)
    cdef double[:, ::1] out = out_arr
    cdef Py_ssize_t b, j, t, off, L, start, lo, hi
    cdef double re, im, v

    for b in prange(n_bins, nogil=True, num_threads=n_threads, schedule="dynamic"):
        off = offsets[b]
        L = lengths[b]
        for j in range(n_frames):
            start = j * hop - L // 2
            lo = 0
            if start < 0:
                lo = -start
            hi = L
            if start + L > n_x:
                hi = n_x - start
            re = 0.0
            im = 0.0
            for t in range(lo, hi):
                v = x[start + t]
                re = re + v * kern_re[off + t]
                im = im + v * kern_im[off + t]
            out[j, b] = re * re + im * im
    return out_arr


def masp_product(const double[:, ::1] F,
                 const Py_ssize_t[::1] shifts,
                 const double[::1] weights,
                 const double[::1] means,
                 const double[::1] pads,
                 int n_threads=1):
    cdef Py_ssize_t n_rows = F.shape[0]
    cdef Py_ssize_t n_bins = F.shape[1]
    cdef Py_ssize_t n_fac = shifts.shape[0]
    out_arr = np.empty((n_rows, n_bins), dtype=np.float64)
    cdef double[:, ::1] out = out_arr
    cdef Py_ssize_t r, i, k, src
    cdef double acc, a, val, mu, pad

    for r in prange(n_rows, nogil=True, num_threads=n_threads):
        mu = means[r]
        pad = pads[r]
        for i in range(n_bins):
            acc = 1.0
            for k in range(n_fac):
                a = weights[k]
                src = i + shifts[k]
                if src < n_bins:
                    val = F[r, src]
                else:
                    val = pad
                acc = acc * (a * val + (1.0 - a) * mu)
            out[r, i] = acc
    return out_arr


def chord_h(const double[:, ::1] Y,
            const double[:, ::1] X,
            const double[::1] freqs,
            Py_ssize_t base,
            const Py_ssize_t[::1] idx_a,
            const Py_ssize_t[::1] idx_b,
            int n_threads=1):
    cdef Py_ssize_t n_pairs = idx_a.shape[0]
    cdef Py_ssize_t n_bins = Y.shape[1]
    out_arr = np.empty(n_pairs, dtype=np.float64)
    cdef double[::1] out = out_arr
    cdef Py_ssize_t p, i, a, b, lo, mid, hi, tmp
    cdef double y, x, sy, fy, sx, fx

    for p in prange(n_pairs, nogil=True, num_threads=n_threads, schedule="static"):
        lo = base
        mid = idx_a[p]
        hi = idx_b[p]
        # fixed multiplication order makes H independent of argument order
        if mid < lo:
            tmp = lo
            lo = mid
            mid = tmp
        if hi < mid:
            tmp = mid
            mid = hi
            hi = tmp
        if mid < lo:
            tmp = lo
            lo = mid
            mid = tmp
        sy = 0.0
        fy = 0.0
        sx = 0.0
        fx = 0.0
        for i in range(n_bins):
            y = Y[lo, i] * Y[mid, i] * Y[hi, i]
            x = X[lo, i] + X[mid, i] + X[hi, i]
            sy = sy + y
            fy = fy + freqs[i] * y
            sx = sx + x
            fx = fx + freqs[i] * x
        out[p] = (fy / sy) / (fx / sx)
    return out_arr
