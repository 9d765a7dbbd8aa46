"""Constant-Q power spectrogram front end."""

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from . import kernels
from .spectra import DEFAULT_GRID, LogGrid, LogSpectrum, gaussian_partials

#: filter_scale presets: pure tones and complex tones respectively.
FILTER_SCALE_PURE = 0.5
FILTER_SCALE_COMPLEX = 0.1


@dataclass(frozen=True)
class CqtParams:
    grid: LogGrid = DEFAULT_GRID
    hop_seconds: float = 0.05
    filter_scale: float = FILTER_SCALE_PURE
    sample_rate: float = 44100.0

    def __post_init__(self):
        if not self.hop_seconds > 0:
            raise ValueError("hop_seconds must be positive")
        if not self.filter_scale > 0:
            raise ValueError("filter_scale must be positive")
        if not self.sample_rate > 0:
            raise ValueError("sample_rate must be positive")
        if not self.grid.fmax < self.sample_rate / 2:
            raise ValueError(
                f"grid tops out at {self.grid.fmax:.1f} Hz, above Nyquist "
                f"for sample_rate {self.sample_rate:g}"
            )

    @property
    def q(self):
        return 1.0 / (2.0 ** (1.0 / self.grid.bins_per_octave) - 1.0)

    @property
    def hop_samples(self):
        return max(1, int(round(self.hop_seconds * self.sample_rate)))

    def window_lengths(self):
        """Analysis window length in samples for every bin."""
        f = self.grid.freqs
        return np.ceil(self.filter_scale * self.q * self.sample_rate / f).astype(np.intp)


@dataclass(frozen=True)
class LogSpectrogram:
    frames: tuple
    frame_times: np.ndarray = field(repr=False)
    params: CqtParams

    def __post_init__(self):
        frames = tuple(self.frames)
        times = np.array(self.frame_times, dtype=np.float64)
        times.setflags(write=False)
        if len(frames) != len(times):
            raise ValueError("frames and frame_times differ in length")
        if any(fr.grid != self.params.grid for fr in frames):
            raise ValueError("all frames must share the spectrogram grid")
        object.__setattr__(self, "frames", frames)
        object.__setattr__(self, "frame_times", times)

    def __len__(self):
        return len(self.frames)

    @property
    def grid(self):
        return self.params.grid

    def matrix(self):
        """Frames x bins density array."""
        if not self.frames:
            return np.zeros((0, self.grid.size))
        return np.vstack([fr.density for fr in self.frames])


@lru_cache(maxsize=8)
def _kernel_bank(params):
    lengths = params.window_lengths()
    offsets = np.zeros(len(lengths), dtype=np.intp)
    offsets[1:] = np.cumsum(lengths)[:-1]
    total = int(lengths.sum())
    re = np.empty(total)
    im = np.empty(total)
    for b, (f, L) in enumerate(zip(params.grid.freqs, lengths)):
        n = np.arange(L)
        w = 0.5 - 0.5 * np.cos(2 * np.pi * (n + 0.5) / L)
        phase = -2 * np.pi * f * n / params.sample_rate
        scale = 1.0 / w.sum()
        o = offsets[b]
        re[o:o + L] = w * np.cos(phase) * scale
        im[o:o + L] = w * np.sin(phase) * scale
    for a in (re, im, offsets, lengths):
        a.setflags(write=False)
    return re, im, offsets, np.ascontiguousarray(lengths)


def cqt_power_spectrogram(pcm, params=CqtParams()):
    """Squared-magnitude constant-Q spectrogram.

    Bin ``b`` of frame ``j`` is ``|sum_n w[n] x[c_j - L_b//2 + n] e^{-2 pi i f_b n / sr}|**2``
    divided by ``(sum w)**2``, with a Hann window ``w`` of length
    ``L_b = ceil(filter_scale * Q * sr / f_b)`` and frame centres
    ``c_j = j * hop``. Samples outside the signal count as zero.
    """
    x = np.ascontiguousarray(pcm, dtype=np.float64)
    if x.ndim != 1:
        raise ValueError("pcm must be mono (1-D)")
    if x.size == 0:
        raise ValueError("empty signal")
    if not np.all(np.isfinite(x)):
        raise ValueError("signal contains NaN or infinite samples")
    hop = params.hop_samples
    n_frames = 1 + (x.size - 1) // hop
    re, im, offsets, lengths = _kernel_bank(params)
    power = kernels.cqt_power(x, re, im, offsets, lengths, hop, n_frames)
    grid = params.grid
    frames = tuple(LogSpectrum(grid, row) for row in power)
    times = np.arange(n_frames) * hop / params.sample_rate
    return LogSpectrogram(frames, times, params)


def spectrogram_of_partials(track, params=CqtParams(), sigma_semitones=0.1):
    """Noise-free spectrogram: one Gaussian-partial spectrum per track step.

    ``track`` is a :class:`maspitch.synth.PartialTrack` (or any object with
    ``times`` and ``steps``).
    """
    frames = []
    for t, partials in zip(track.times, track.steps):
        if not partials:
            raise ValueError(f"no partials at t={t:g} s")
        frames.append(gaussian_partials(partials, sigma_semitones, params.grid))
    return LogSpectrogram(tuple(frames), np.asarray(track.times), params)


def peak_width_octaves(spectrum, level_db=-3.0):
    """Width (octaves) of the main peak at ``level_db`` below its maximum.

    Crossings are located by linear interpolation between bins.
    """
    d = spectrum.density
    i = int(np.argmax(d))
    thr = d[i] * 10 ** (level_db / 10)
    m = spectrum.grid.centers

    def crossing(step):
        j = i
        while 0 <= j + step < len(d) and d[j + step] > thr:
            j += step
        k = j + step
        if not 0 <= k < len(d):
            return m[j]
        frac = (d[j] - thr) / (d[j] - d[k])
        return m[j] + frac * (m[k] - m[j])

    return float(crossing(1) - crossing(-1))


def frame_at(spec, t):
    """Frame nearest to time ``t``."""
    idx = int(np.argmin(np.abs(spec.frame_times - t)))
    return spec.frames[idx]


__all__ = [
    "CqtParams",
    "LogSpectrogram",
    "cqt_power_spectrogram",
    "spectrogram_of_partials",
    "peak_width_octaves",
    "frame_at",
    "FILTER_SCALE_PURE",
    "FILTER_SCALE_COMPLEX",
]
