"""Classical pitch models used as comparison oracles.

These reproduce known failure modes: HPS collapses to zero when a harmonic
is missing, the partial-spacing model misreads odd-harmonic spectra and the
GCD model is fooled by slightly mistuned partials.
"""

import math
from dataclasses import dataclass
from functools import reduce

import numpy as np

from .spectra import LinearSpectrum


def line_spectrum(partials, freqs):
    """Linear spectrum with each partial's power on its nearest bin."""
    freqs = np.asarray(freqs, dtype=np.float64)
    d = np.zeros(len(freqs))
    for p in partials:
        i = int(np.argmin(np.abs(freqs - p.freq)))
        d[i] += p.amp
    return LinearSpectrum(freqs, d)


def uniform_axis(fmax, resolution=1.0):
    """``0, resolution, 2*resolution, ...`` up to ``fmax``."""
    return np.arange(0.0, fmax + resolution / 2, resolution)


def hps(X, n):
    """Harmonic product spectrum ``Y[i] = prod_{k=1..n} X[i*k]``.

    Bins whose multiple ``i*k`` falls past the end contribute zero.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    d = X.density
    N = len(d)
    Y = d.copy()
    idx = np.arange(N)
    for k in range(2, n + 1):
        src = idx * k
        factor = np.zeros(N)
        ok = src < N
        factor[ok] = d[src[ok]]
        Y *= factor
    return X.with_density(Y)


def hps_pitch(X, n):
    """Frequency of the HPS maximum, skipping the DC bin."""
    Y = hps(X, n).density
    i = 1 + int(np.argmax(Y[1:]))
    return float(X.freqs[i])


@dataclass(frozen=True)
class Histogram:
    bin_width: float
    counts: dict

    def as_arrays(self):
        keys = sorted(self.counts)
        return (np.array(keys, dtype=float) * self.bin_width,
                np.array([self.counts[k] for k in keys]))

    def count_at(self, freq):
        return self.counts.get(int(math.floor(freq / self.bin_width)), 0)

    def pitch(self):
        """Rightmost of the tallest bins (lower edge, Hz)."""
        if not self.counts:
            return None
        top = max(self.counts.values())
        return max(b for b, c in self.counts.items() if c == top) * self.bin_width


def subharmonic_histogram(partials, max_divisor, bin_width=1.0):
    """Count ``f/d`` for every partial ``f`` and ``d = 1..max_divisor``."""
    if max_divisor < 1:
        raise ValueError("max_divisor must be >= 1")
    if not bin_width > 0:
        raise ValueError("bin_width must be positive")
    counts = {}
    for p in partials:
        for d in range(1, max_divisor + 1):
            b = int(math.floor(p.freq / d / bin_width))
            counts[b] = counts.get(b, 0) + 1
    return Histogram(bin_width, counts)


def gcd_pitch(freqs, quantum=1.0):
    freqs = list(freqs)
    if not freqs:
        raise ValueError("no frequencies")
    if not quantum > 0:
        raise ValueError("quantum must be positive")
    if min(freqs) < quantum:
        raise ValueError("frequency below the quantum")
    return reduce(math.gcd, (int(round(f / quantum)) for f in freqs)) * quantum


def spacing_pitch(freqs):
    f = np.sort(np.asarray(list(freqs), dtype=float))
    if len(f) < 2:
        raise ValueError("spacing needs at least two partials")
    return float(np.mean(np.diff(f)))


def lowest_partial(freqs):
    freqs = list(freqs)
    if not freqs:
        raise ValueError("no partials")
    return float(min(freqs))
