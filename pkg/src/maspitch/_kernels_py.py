"""Pure numpy versions of the compiled kernels in ``_kernels.pyx``.

Same signatures and results (up to floating-point summation order). The
``n_threads`` argument is accepted for interface parity and ignored.
"""

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view


def cqt_power(x, kern_re, kern_im, offsets, lengths, hop, n_frames, n_threads=1):
    n_bins = len(offsets)
    out = np.zeros((n_frames, n_bins))
    x = np.asarray(x, dtype=np.float64)
    last_start = (n_frames - 1) * hop
    for b in range(n_bins):
        off, L = int(offsets[b]), int(lengths[b])
        kern = kern_re[off:off + L] + 1j * kern_im[off:off + L]
        left = L // 2
        # zero-pad so every frame's window lies inside the buffer
        padded = np.zeros(left + max(len(x), last_start + L) + L)
        padded[left:left + len(x)] = x
        frames = sliding_window_view(padded[:last_start + L], L)[::hop][:n_frames]
        out[:, b] = np.abs(frames @ kern) ** 2
    return out


def masp_product(F, shifts, weights, means, pads, n_threads=1):
    F = np.asarray(F, dtype=np.float64)
    n_rows, n_bins = F.shape
    out = np.ones_like(F)
    means = np.asarray(means)[:, None]
    pads = np.asarray(pads)[:, None]
    for s, a in zip(shifts, weights):
        s = int(s)
        shifted = np.empty_like(F)
        if s < n_bins:
            shifted[:, :n_bins - s] = F[:, s:]
            shifted[:, n_bins - s:] = pads
        else:
            shifted[:] = pads
        out *= a * shifted + (1.0 - a) * means
    return out


def chord_h(Y, X, freqs, base, idx_a, idx_b, n_threads=1):
    idx = np.sort(np.stack([np.full(len(idx_a), base), idx_a, idx_b]), axis=0)
    out = np.empty(len(idx_a))
    chunk = 256
    for s in range(0, len(idx_a), chunk):
        lo, mid, hi = idx[:, s:s + chunk]
        y = Y[lo] * Y[mid] * Y[hi]
        x = X[lo] + X[mid] + X[hi]
        ey = (y @ freqs) / y.sum(axis=1)
        ex = (x @ freqs) / x.sum(axis=1)
        out[s:s + chunk] = ey / ex
    return out
