"""Mean averaging smoothed product (MASP) spectrum and pitch readout.

Each subharmonic factor blends the spectrum read at ``k`` times the
frequency with the spectrum's global mean::

    F_k(m) = a_k F(m + log2 k) + (1 - a_k) <F>,    a_k = 1 / (1 + k**b)

and the pitch spectrum is the bin-wise product over ``k = 1..n``. Because
``a_k <= 1/2`` no factor can vanish where ``<F> > 0``, so a missing
harmonic lowers the product instead of zeroing it.
"""

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import kernels
from .spectra import DegenerateSpectrumError, LogSpectrum


@dataclass(frozen=True)
class MaspParams:
    """Smoothing exponent ``b``, factor count ``n`` and voicing floor.

    ``voicing_threshold=None`` means ``1e-8`` times the grid size.
    """

    b: float = 0.5
    n: int = 16
    voicing_threshold: Optional[float] = None

    def __post_init__(self):
        if not self.b > 0:
            raise ValueError(f"b must be positive, got {self.b}")
        if int(self.n) != self.n or self.n < 1:
            raise ValueError(f"n must be an integer >= 1, got {self.n}")
        if self.voicing_threshold is not None and not self.voicing_threshold >= 0:
            raise ValueError("voicing_threshold must be non-negative")

    def threshold_for(self, grid):
        if self.voicing_threshold is None:
            return 1e-8 * grid.size
        return self.voicing_threshold


#: Parameters used for the interval and chord tables.
CONSONANCE_PARAMS = MaspParams(b=0.5, n=32)


@dataclass(frozen=True)
class Pitch:
    f0: float
    peak_m: float
    confidence: float


@dataclass(frozen=True)
class MaspResult:
    pitch_spectrum: LogSpectrum
    loudness_scale: float
    pitch: Optional[Pitch]

    @property
    def voiced(self):
        return self.pitch is not None


@dataclass(frozen=True)
class PitchTrack:
    times: np.ndarray
    f0: np.ndarray
    confidence: np.ndarray
    voiced: np.ndarray

    def __len__(self):
        return len(self.times)

    def voiced_f0(self):
        return self.f0[self.voiced]


def smoothing_weight(k, b):
    """``1 / (1 + k**b)``: 0.5 at ``k = 1``, decreasing towards 0."""
    if k < 1:
        raise ValueError(f"harmonic number must be >= 1, got {k}")
    if not b > 0:
        raise ValueError(f"b must be positive, got {b}")
    return 1.0 / (1.0 + k ** b)


def _factor_tables(grid, params):
    ks = range(1, params.n + 1)
    shifts = np.array([grid.shift_of(k) for k in ks], dtype=np.intp)
    weights = np.array([smoothing_weight(k, params.b) for k in ks])
    return shifts, weights


def subharmonic_factor(F, k, b):
    """Smoothed subharmonic spectrum of order ``k``.

    The shift ``log2 k`` is rounded to whole bins. Bins read from beyond the
    top of the grid take the spectrum's floor value ``min(F)``.
    """
    d = F.density
    if d.size == 0:
        raise ValueError("empty spectrum")
    a = smoothing_weight(k, b)
    s = F.grid.shift_of(k)
    shifted = np.full(d.size, d.min())
    if s < d.size:
        shifted[: d.size - s] = d[s:]
    return F.with_density(a * shifted + (1 - a) * d.mean())


def _product(rows, grid, params):
    rows = np.ascontiguousarray(rows, dtype=np.float64)
    shifts, weights = _factor_tables(grid, params)
    means = np.ascontiguousarray(rows.mean(axis=1))
    pads = np.ascontiguousarray(rows.min(axis=1))
    return kernels.masp_product(rows, shifts, weights, means, pads)


def masp_spectrum(F, params=MaspParams()):
    """Bin-wise product of the smoothed subharmonic factors ``k = 1..n``."""
    if not np.any(F.density > 0):
        raise DegenerateSpectrumError("unvoiced input; check voicing upstream")
    P = _product(F.density[None, :], F.grid, params)[0]
    return F.with_density(P)


def loudness_scale(x_sum, product_sum):
    """``log(1 + x_sum) / product_sum`` (natural log)."""
    if not product_sum > 0:
        raise ValueError("product sum must be positive")
    if x_sum < 0:
        raise ValueError("spectrum sum must be non-negative")
    return math.log1p(x_sum) / product_sum


def _readout(P, grid, voiced):
    # argmax with ties resolved to the highest-frequency bin
    i = len(P) - 1 - int(np.argmax(P[::-1]))
    total = P.sum()
    conf = float(P[i] / total) if total > 0 else 0.0
    m = float(grid.centers[i])
    return Pitch(f0=float(grid.freqs[i]), peak_m=m, confidence=conf) if voiced else None


def _frames(rows, grid, params):
    """MASP results for a frames x bins array."""
    rows = np.asarray(rows, dtype=np.float64)
    sums = rows.sum(axis=1)
    means = rows.mean(axis=1)
    live = means > 0
    out_P = np.zeros_like(rows)
    scales = np.zeros(len(rows))
    if np.any(live):
        # unit-mean input keeps the n-fold product away from underflow;
        # S * P = log1p(sum F) * P / sum P is unaffected by the rescaling
        unit = rows[live] / means[live, None]
        P = _product(unit, grid, params)
        Psum = P.sum(axis=1)
        out_P[live] = np.log1p(sums[live])[:, None] * P / Psum[:, None]
        # S itself can exceed float range for very quiet frames; it becomes inf
        with np.errstate(divide="ignore", over="ignore", under="ignore"):
            scales[live] = np.log1p(sums[live]) / (Psum * means[live] ** params.n)
    threshold = params.threshold_for(grid)
    results = []
    for r in range(len(rows)):
        voiced = bool(live[r]) and sums[r] >= threshold
        results.append(
            MaspResult(
                pitch_spectrum=LogSpectrum(grid, out_P[r]),
                loudness_scale=float(scales[r]),
                pitch=_readout(out_P[r], grid, voiced),
            )
        )
    return results


def masp_frame(F, params=MaspParams()):
    """Loudness-scaled MASP spectrum of one frame plus its pitch readout.

    The pitch is reported only when ``sum(F)`` reaches the voicing threshold.
    """
    return _frames(F.density[None, :], F.grid, params)[0]


def masp_spectrogram(spec, params=MaspParams()):
    """Apply :func:`masp_frame` to every frame.

    Returns ``(results, track)``; unvoiced frames have ``f0 = nan``.
    """
    if len(spec) == 0:
        raise ValueError("empty spectrogram")
    results = _frames(spec.matrix(), spec.grid, params)
    f0 = np.array([r.pitch.f0 if r.pitch else np.nan for r in results])
    conf = np.array([r.pitch.confidence if r.pitch else 0.0 for r in results])
    voiced = np.array([r.pitch is not None for r in results])
    track = PitchTrack(np.asarray(spec.frame_times), f0, conf, voiced)
    return results, track


def top_peaks(spectrum, count=2):
    """Frequencies of the ``count`` highest local maxima, highest first."""
    from scipy.signal import find_peaks

    d = spectrum.density
    idx, _ = find_peaks(np.concatenate(([-np.inf], d, [-np.inf])))
    idx = idx - 1
    order = sorted(idx, key=lambda i: (-d[i], -i))[:count]
    return [float(spectrum.grid.freqs[i]) for i in order]
