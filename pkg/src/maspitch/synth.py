"""Deterministic test signals, as partial lists and as rendered PCM.

``Partial.amp`` is a power weight; rendering uses ``sqrt(amp)`` as the
sinusoid amplitude.
"""

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .spectra import Partial

SHIFTED_COMPLEX_HZ = (930.0, 1770.0, 2730.0, 3570.0, 4530.0, 5370.0)
AMBIGUOUS_COMPLEX_HZ = (900.0, 1100.0, 1300.0, 1500.0, 1700.0)


def _harmonic_partials(f0, harmonics, removed):
    if not f0 > 0:
        raise ValueError("f0 must be positive")
    removed = set(removed or ())
    out = [Partial(h * f0, 1.0 / h**2) for h in harmonics if h not in removed]
    if not out:
        raise ValueError("every partial was removed")
    return out


def sawtooth_partials(f0, n_partials=16, removed=()):
    """Harmonics ``1..n_partials`` of ``f0`` with power ``1/h**2``."""
    if n_partials < 1:
        raise ValueError("n_partials must be >= 1")
    return _harmonic_partials(f0, range(1, n_partials + 1), removed)


def square_partials(f0, n_partials=16, removed=()):
    """Odd harmonics of ``f0`` up to harmonic ``n_partials``, power ``1/h**2``."""
    if n_partials < 1:
        raise ValueError("n_partials must be >= 1")
    return _harmonic_partials(f0, range(1, n_partials + 1, 2), removed)


def inharmonic_shifted_complex():
    """900 Hz harmonic series with each partial moved by 30 Hz."""
    return [Partial(f, 1.0) for f in SHIFTED_COMPLEX_HZ]


def ambiguous_complex():
    return [Partial(f, 1.0) for f in AMBIGUOUS_COMPLEX_HZ]


@dataclass(frozen=True)
class PartialTrack:
    """Time-varying partial lists sampled at ``times`` (seconds).

    Partials are matched across steps by position when rendering.
    """

    times: np.ndarray
    steps: tuple
    offsets: Optional[np.ndarray] = field(default=None, repr=False)

    def __post_init__(self):
        times = np.array(self.times, dtype=np.float64)
        steps = tuple(tuple(s) for s in self.steps)
        if times.ndim != 1 or len(times) != len(steps):
            raise ValueError("times and steps must have equal length")
        if len(times) > 1 and np.any(np.diff(times) <= 0):
            raise ValueError("times must be strictly increasing")
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "steps", steps)

    def __len__(self):
        return len(self.times)

    def max_freq(self):
        return max(p.freq for s in self.steps for p in s)


def constant_track(partials, duration, step=0.05):
    times = np.arange(0.0, duration + 1e-12, step)
    return PartialTrack(times, [list(partials)] * len(times))


def glissando_pair(base=440.0, start_offset=-1.0, end_offset=13.0, duration=14.0,
                   step=0.05, template=None):
    """Fixed tone at ``base`` plus a tone gliding from ``start_offset`` to
    ``end_offset`` semitones, linear in semitones over ``duration`` seconds.

    ``template`` maps a fundamental to a partial list (default: a single
    pure partial). The track's ``offsets`` holds the glide offset per step.
    """
    if not duration > 0:
        raise ValueError("duration must be positive")
    template = template or (lambda f: [Partial(f, 1.0)])
    n = int(round(duration / step))
    times = np.linspace(0.0, duration, n + 1)
    offsets = start_offset + (end_offset - start_offset) * times / duration
    fixed = list(template(base))
    steps = [fixed + list(template(base * 2 ** (o / 12))) for o in offsets]
    return PartialTrack(times, steps, offsets)


def vibrato_track(partials, duration, depth_semitones=0.2, rate_hz=5.0, step=0.005):
    """Whole-template frequency modulation of ``depth`` semitones peak."""
    times = np.arange(0.0, duration + 1e-12, step)
    ratio = 2 ** (depth_semitones * np.sin(2 * np.pi * rate_hz * times) / 12)
    steps = [[Partial(p.freq * r, p.amp) for p in partials] for r in ratio]
    return PartialTrack(times, steps)


def _check_rate(max_freq, sample_rate):
    if not sample_rate >= 4 * max_freq:
        raise ValueError(
            f"sample_rate {sample_rate:g} Hz is below 4x the highest partial "
            f"({max_freq:g} Hz)"
        )


def render_pcm(source, sample_rate=44100.0, duration=None):
    """Sum of sinusoids, phase zero at t = 0.

    ``source`` is a partial list (``duration`` required) or a
    :class:`PartialTrack`, whose frequencies are interpolated per sample
    and integrated into a continuous phase.
    """
    if isinstance(source, PartialTrack):
        return _render_track(source, sample_rate, duration)
    partials = list(source)
    if duration is None or not duration > 0:
        raise ValueError("duration must be positive")
    n = int(round(duration * sample_rate))
    if n == 0:
        raise ValueError("duration shorter than one sample")
    _check_rate(max(p.freq for p in partials), sample_rate)
    t = np.arange(n) / sample_rate
    out = np.zeros(n)
    for p in partials:
        out += np.sqrt(p.amp) * np.sin(2 * np.pi * p.freq * t)
    return out


def _render_track(track, sample_rate, duration):
    if duration is None:
        duration = float(track.times[-1])
    if not duration > 0:
        raise ValueError("duration must be positive")
    n = int(round(duration * sample_rate))
    if n == 0:
        raise ValueError("duration shorter than one sample")
    widths = {len(s) for s in track.steps}
    if len(widths) != 1:
        raise ValueError("rendering needs the same partial count at every step")
    _check_rate(track.max_freq(), sample_rate)
    t = np.arange(n) / sample_rate
    freqs = np.array([[p.freq for p in s] for s in track.steps])
    amps = np.array([[p.amp for p in s] for s in track.steps])
    out = np.zeros(n)
    for j in range(freqs.shape[1]):
        f = np.interp(t, track.times, freqs[:, j])
        a = np.interp(t, track.times, amps[:, j])
        phase = 2 * np.pi * np.concatenate(([0.0], np.cumsum(f[:-1]))) / sample_rate
        out += np.sqrt(a) * np.sin(phase)
    return out


@dataclass(frozen=True)
class SignalSpec:
    """Recipe for one synthetic test signal."""

    kind: str = "sawtooth"
    f0: float = 100.0
    duration: float = 2.0
    sample_rate: float = 44100.0
    removed_harmonics: frozenset = frozenset()
    custom_partials: tuple = ()
    n_partials: Optional[int] = None
    glissando: Optional[tuple] = None
    template: str = "pure"

    KINDS = ("sawtooth", "square", "custom", "glissando_pair")

    def __post_init__(self):
        if self.kind not in self.KINDS:
            raise ValueError(f"unknown kind {self.kind!r}; expected one of {self.KINDS}")
        if not self.duration > 0:
            raise ValueError("duration must be positive")
        if not self.sample_rate > 0:
            raise ValueError("sample_rate must be positive")
        if self.kind != "custom" and not self.f0 > 0:
            raise ValueError("f0 must be positive")
        if self.kind == "custom" and not self.custom_partials:
            raise ValueError("custom signals need at least one partial")

    def default_partial_count(self, f0, ceiling_hz=None):
        """16 harmonics, or fewer to stay below sr/4 and ``ceiling_hz``."""
        limit = self.sample_rate / 4
        if ceiling_hz is not None:
            limit = min(limit, ceiling_hz)
        return max(1, min(16, int(limit // f0)))

    def _template(self, ceiling_hz=None):
        def make(f):
            if self.template == "pure":
                return [Partial(f, 1.0)]
            if self.template == "sawtooth":
                return sawtooth_partials(f, self.n_partials or self.default_partial_count(f, ceiling_hz))
            raise ValueError(f"unknown template {self.template!r}")

        return make

    def partials(self, ceiling_hz=None):
        if self.kind == "custom":
            return list(self.custom_partials)
        n = self.n_partials or self.default_partial_count(self.f0, ceiling_hz)
        if self.kind == "sawtooth":
            return sawtooth_partials(self.f0, n, self.removed_harmonics)
        if self.kind == "square":
            return square_partials(self.f0, n, self.removed_harmonics)
        raise ValueError("glissando signals have a partial track, not a fixed list")

    def track(self, step=0.05, ceiling_hz=None):
        if self.kind == "glissando_pair":
            start, end = self.glissando or (-1.0, 13.0)
            tmpl = self._template(ceiling_hz)
            if self.template == "sawtooth":
                # fixed partial count so the gliding tone renders continuously
                n = self.n_partials or self.default_partial_count(self.f0 * 2 ** (max(start, end) / 12), ceiling_hz)
                tmpl = lambda f: sawtooth_partials(f, n)  # noqa: E731
            return glissando_pair(self.f0, start, end, self.duration, step, tmpl)
        return constant_track(self.partials(ceiling_hz), self.duration, step)

    def render(self):
        if self.kind == "glissando_pair":
            return render_pcm(self.track(step=0.01), self.sample_rate, self.duration)
        return render_pcm(self.partials(), self.sample_rate, self.duration)
