"""Harmonicity of tone combinations from their MASP spectra.

Two measures are provided:

``h-ratio``
    Tones are analysed separately. The MASP spectra are multiplied, the
    frequency spectra summed, both strictly normalized, and
    ``H = <f>_MASP / <f>_spectrum``.
``h-shift``
    One joint spectrum ``F`` and its MASP spectrum ``P``;
    ``H = 2 ** (<m>_P - <m>_F)``. Used for time tracks.
"""

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import kernels
from .masp import CONSONANCE_PARAMS, _frames, _product
from .spectra import (
    CONSONANCE_GRID,
    DegenerateSpectrumError,
    GridMismatchError,
    Partial,
    expected_freq,
    expected_mel,
    gaussian_partials,
    strict_normalize,
)

#: Gaussian width of each partial in the interval/chord experiments.
DEFAULT_SIGMA = 0.1


@dataclass(frozen=True)
class ToneSpec:
    partials: tuple
    label: str = ""

    def __post_init__(self):
        partials = tuple(self.partials)
        if not partials:
            raise ValueError("a tone needs at least one partial")
        object.__setattr__(self, "partials", partials)

    @classmethod
    def pure(cls, freq, label=""):
        return cls((Partial(freq, 1.0),), label or f"{freq:g} Hz")

    def key(self):
        return tuple(sorted((p.freq, p.amp) for p in self.partials))

    def transposed(self, ratio):
        return ToneSpec(tuple(Partial(p.freq * ratio, p.amp) for p in self.partials), self.label)


@dataclass(frozen=True)
class HarmonicityResult:
    h: float
    expected_freq_masp: float
    expected_freq_spectrum: float


@dataclass(frozen=True)
class HCurve:
    axis: np.ndarray
    h_values: np.ndarray

    def __post_init__(self):
        axis = np.asarray(self.axis)
        h = np.asarray(self.h_values, dtype=np.float64)
        if axis.shape[0] != h.shape[0]:
            raise ValueError("axis and h_values differ in length")
        object.__setattr__(self, "axis", axis)
        object.__setattr__(self, "h_values", h)

    def __len__(self):
        return len(self.h_values)


def _same_grid(spectra):
    spectra = list(spectra)
    if len(spectra) < 2:
        raise ValueError("need at least two spectra")
    grid = spectra[0].grid
    if any(s.grid != grid for s in spectra[1:]):
        raise GridMismatchError("spectra are on different grids")
    return spectra, grid


def joint_masp(masp_spectra):
    """Strictly normalized bin-wise product of per-tone MASP spectra."""
    spectra, _ = _same_grid(masp_spectra)
    for s in spectra:
        if not np.any(s.density > 0):
            raise DegenerateSpectrumError("a MASP spectrum has no positive bin")
    # per-factor normalization keeps a three-way product clear of underflow
    prod = strict_normalize(spectra[0]).density.copy()
    for s in spectra[1:]:
        prod *= strict_normalize(s).density
    return strict_normalize(spectra[0].with_density(prod))


def joint_spectrum(tone_spectra):
    """Strictly normalized sum of the individually normalized tone spectra."""
    spectra, _ = _same_grid(tone_spectra)
    total = strict_normalize(spectra[0]).density.copy()
    for s in spectra[1:]:
        total += strict_normalize(s).density
    return strict_normalize(spectra[0].with_density(total))


def _canonical(tones):
    tones = list(tones)
    if len(tones) < 2:
        raise ValueError("harmonicity needs at least two tones")
    return sorted(tones, key=ToneSpec.key)


def _tone_spectra(tones, sigma, grid, params):
    Fs = [gaussian_partials(t.partials, sigma, grid) for t in tones]
    Ys = [r.pitch_spectrum for r in _frames(np.vstack([F.density for F in Fs]), grid, params)]
    return Fs, Ys


def harmonicity_ratio(tones, sigma_semitones=DEFAULT_SIGMA, grid=CONSONANCE_GRID,
                      params=CONSONANCE_PARAMS):
    """H of a tone combination from separately analysed tones."""
    tones = _canonical(tones)
    Fs, Ys = _tone_spectra(tones, sigma_semitones, grid, params)
    ey = expected_freq(joint_masp(Ys))
    ex = expected_freq(joint_spectrum(Fs))
    return HarmonicityResult(ey / ex, ey, ex)


def harmonicity_shift(F, P):
    """``2 ** (<m>_P - <m>_F)`` for a spectrum and its MASP spectrum."""
    if F.grid != P.grid:
        raise GridMismatchError("F and P are on different grids")
    return float(2.0 ** (expected_mel(P) - expected_mel(F)))


def _as_ratio(x):
    if isinstance(x, str):
        return float(Fraction(x))
    return float(x)


def interval_sweep(base_freq=440.0, offsets=None, ratios=None, template=None,
                   sigma_semitones=DEFAULT_SIGMA, grid=CONSONANCE_GRID,
                   params=CONSONANCE_PARAMS):
    """H of two-tone intervals above ``base_freq``.

    Give either ``offsets`` (semitones) or ``ratios`` (floats or strings
    like ``"3/2"``). ``template`` maps a fundamental to a partial list;
    pure tones by default.
    """
    if (offsets is None) == (ratios is None):
        raise ValueError("give exactly one of offsets or ratios")
    axis = list(offsets if offsets is not None else ratios)
    if not axis:
        raise ValueError("empty sweep")
    if offsets is not None:
        rs = [2.0 ** (float(o) / 12) for o in axis]
    else:
        rs = [_as_ratio(r) for r in axis]
    make = template or (lambda f: [Partial(f, 1.0)])
    base = ToneSpec(tuple(make(base_freq)), "base")
    hs = [
        harmonicity_ratio([base, ToneSpec(tuple(make(base_freq * r)))],
                          sigma_semitones, grid, params).h
        for r in rs
    ]
    return HCurve(np.array(axis, dtype=object if ratios is not None else float), np.array(hs))


@dataclass(frozen=True)
class ChordGrid:
    x_axis: np.ndarray
    y_axis: np.ndarray
    h: np.ndarray

    def at(self, x, y):
        i = int(np.argmin(np.abs(self.y_axis - y)))
        j = int(np.argmin(np.abs(self.x_axis - x)))
        return float(self.h[i, j])


def _axis(lo, hi, step):
    n = int(round((hi - lo) / step)) + 1
    return np.round(lo + step * np.arange(n), 10)


def chord_grid(base_freq=440.0, x_range=(0.0, 12.0), y_range=None, step=0.1,
               sigma_semitones=DEFAULT_SIGMA, grid=CONSONANCE_GRID,
               params=CONSONANCE_PARAMS, template=None):
    """H for three tones ``(base, base*2**(x/12), base*2**(y/12))``.

    Row ``i`` of the result corresponds to ``y_axis[i]``, column ``j`` to
    ``x_axis[j]``.
    """
    if not step > 0:
        raise ValueError("step must be positive")
    y_range = x_range if y_range is None else y_range
    xs = _axis(*x_range, step)
    ys = _axis(*y_range, step)
    make = template or (lambda f: [Partial(f, 1.0)])
    offs = np.union1d(np.union1d(xs, ys), [0.0])
    tones = [ToneSpec(tuple(make(base_freq * 2 ** (o / 12)))) for o in offs]
    # rows sorted by tone key so the kernel's index order is the canonical order
    order = sorted(range(len(tones)), key=lambda i: tones[i].key())
    rank = np.empty(len(tones), dtype=np.intp)
    rank[order] = np.arange(len(tones))
    Fs, Ys = _tone_spectra([tones[i] for i in order], sigma_semitones, grid, params)
    X = np.ascontiguousarray([strict_normalize(F).density for F in Fs])
    Y = np.ascontiguousarray([strict_normalize(s).density for s in Ys])
    pos = {float(o): int(rank[i]) for i, o in enumerate(offs)}
    base = pos[0.0]

    h = np.empty((len(ys), len(xs)))
    pairs = {}
    for i, y in enumerate(ys):
        for j, x in enumerate(xs):
            a, b = sorted((pos[float(x)], pos[float(y)]))
            pairs.setdefault((a, b), []).append((i, j))
    keys = list(pairs)
    idx_a = np.array([k[0] for k in keys], dtype=np.intp)
    idx_b = np.array([k[1] for k in keys], dtype=np.intp)
    vals = kernels.chord_h(Y, X, np.ascontiguousarray(grid.freqs), base, idx_a, idx_b)
    for k, v in zip(keys, vals):
        for i, j in pairs[k]:
            h[i, j] = v
    return ChordGrid(xs, ys, h)


def glissando_h_track(spec, params=CONSONANCE_PARAMS):
    """``h-shift`` per frame of a spectrogram (tones not separated)."""
    if len(spec) == 0:
        raise ValueError("empty spectrogram")
    rows = spec.matrix()
    if np.any(rows.sum(axis=1) <= 0):
        raise DegenerateSpectrumError("spectrogram contains a silent frame")
    m = spec.grid.centers
    means = rows.mean(axis=1, keepdims=True)
    P = _product(rows / means, spec.grid, params)
    em_F = (rows @ m) / rows.sum(axis=1)
    em_P = (P @ m) / P.sum(axis=1)
    return HCurve(np.asarray(spec.frame_times), 2.0 ** (em_P - em_F))


#: Intervals of the two-tone table: (name, steps or ratio string).
INTERVAL_TABLE = (
    ("Unison", "0"),
    ("Octave", "12"),
    ("Perfect Fifth", "3/2"),
    ("Perfect Fifth", "7"),
    ("Perfect Fourth", "4/3"),
    ("Perfect Fourth", "5"),
    ("Major Sixth", "5/3"),
    ("Major Sixth", "9"),
    ("Major Third", "5/4"),
    ("Major Third", "4"),
    ("Septimal Minor Seventh", "7/4"),
    ("Minor Third", "6/5"),
    ("Diminished Fifth", "7/5"),
    ("Diminished Sixth", "8/5"),
    ("Minor Third", "3"),
    ("Minor Seventh", "10"),
    ("Tritone", "6"),
    ("Minor Sixth", "8"),
    ("Septimal Minor Third", "7/6"),
    ("Major Seventh", "11"),
    ("Major Second", "2"),
    ("Minor Second", "1"),
)

#: Three-tone chords: (note names, semitone offsets above the root).
CHORD_TABLE = (
    ("C F A", (0, 5, 9)),
    ("C E G", (0, 4, 7)),
    ("C E Bb", (0, 4, 10)),
    ("C Eb Ab", (0, 3, 8)),
    ("C Eb G", (0, 3, 7)),
    ("C Eb A", (0, 3, 9)),
    ("C E A", (0, 4, 9)),
    ("C Eb Gb", (0, 3, 6)),
)


def interval_ratio(steps_or_ratio):
    """Frequency ratio for a table entry: ``"7"`` is 7 semitones, ``"3/2"`` a ratio."""
    if "/" in steps_or_ratio:
        return float(Fraction(steps_or_ratio))
    return 2.0 ** (float(steps_or_ratio) / 12)


def interval_table(base_freq=440.0, sigma_semitones=DEFAULT_SIGMA, grid=CONSONANCE_GRID,
                   params=CONSONANCE_PARAMS):
    """``[(name, steps_or_ratio, h), ...]`` over :data:`INTERVAL_TABLE`."""
    curve = interval_sweep(base_freq, ratios=[interval_ratio(s) for _, s in INTERVAL_TABLE],
                           sigma_semitones=sigma_semitones, grid=grid, params=params)
    return [(name, s, float(h)) for (name, s), h in zip(INTERVAL_TABLE, curve.h_values)]


def chord_table(base_freq=440.0, sigma_semitones=DEFAULT_SIGMA, grid=CONSONANCE_GRID,
                params=CONSONANCE_PARAMS):
    """``[(notes, offsets, h), ...]`` over :data:`CHORD_TABLE`."""
    rows = []
    for notes, offs in CHORD_TABLE:
        tones = [ToneSpec.pure(base_freq * 2 ** (o / 12)) for o in offs]
        rows.append((notes, offs, harmonicity_ratio(tones, sigma_semitones, grid, params).h))
    return rows
