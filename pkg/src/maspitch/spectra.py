"""Spectral types on linear and log2-frequency grids.

A :class:`LogGrid` places bin ``i`` at ``m_i = i / bins_per_octave`` octaves
above ``omega0``; a bin's frequency is ``omega0 * 2**m_i``.
"""

import math
import warnings
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

C1_HZ = 32.70319566257483
C0_HZ = C1_HZ / 2


class DegenerateSpectrumError(ValueError):
    """A spectrum with no positive bin was used where a distribution is needed."""


class GridMismatchError(ValueError):
    """Spectra defined on different grids were combined."""


class GridRangeWarning(UserWarning):
    """A partial lies (partly) outside the analysis grid and was truncated."""


def _frozen(a):
    a = np.array(a, dtype=np.float64)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class LogGrid:
    """Uniform grid in log2 frequency.

    Parameters
    ----------
    omega0 : float
        Frequency of bin 0 in Hz.
    bins_per_octave : int
    n_octaves : int
    """

    omega0: float = C1_HZ
    bins_per_octave: int = 48
    n_octaves: int = 8

    def __post_init__(self):
        if not self.omega0 > 0:
            raise ValueError(f"omega0 must be positive, got {self.omega0}")
        if int(self.bins_per_octave) != self.bins_per_octave or self.bins_per_octave < 1:
            raise ValueError("bins_per_octave must be a positive integer")
        if int(self.n_octaves) != self.n_octaves or self.n_octaves < 1:
            raise ValueError("n_octaves must be a positive integer")

    @property
    def size(self):
        return self.bins_per_octave * self.n_octaves

    def __len__(self):
        return self.size

    @cached_property
    def centers(self):
        """Bin centres in octaves above ``omega0``."""
        return _frozen(np.arange(self.size) / self.bins_per_octave)

    @cached_property
    def freqs(self):
        """Bin centre frequencies in Hz."""
        return _frozen(self.omega0 * np.exp2(self.centers))

    @property
    def fmax(self):
        return float(self.freqs[-1])

    def mel(self, omega):
        return mel_of_freq(omega, self)

    def freq(self, m):
        return freq_of_mel(m, self)

    def index_of(self, omega):
        """Nearest bin index to ``omega`` (may fall outside the grid)."""
        return int(math.floor(mel_of_freq(omega, self) * self.bins_per_octave + 0.5))

    def shift_of(self, k):
        """Bin offset realizing a frequency ratio ``k``, rounded half up."""
        return int(math.floor(math.log2(k) * self.bins_per_octave + 0.5))


#: Default grid for pitch analysis: C1 upwards, quarter-semitone bins.
DEFAULT_GRID = LogGrid()

#: Grid used for the interval/chord tables: C0 upwards, 0.1-semitone bins.
CONSONANCE_GRID = LogGrid(omega0=C0_HZ, bins_per_octave=120, n_octaves=9)


def mel_of_freq(omega, grid):
    """Octaves of ``omega`` above ``grid.omega0``.

    Accepts scalars or arrays; raises ``ValueError`` for non-positive input.
    """
    w = np.asarray(omega, dtype=np.float64)
    if np.any(~(w > 0)):
        raise ValueError("frequency must be positive")
    m = np.log2(w / grid.omega0)
    return float(m) if m.ndim == 0 else m


def freq_of_mel(m, grid):
    f = grid.omega0 * np.exp2(np.asarray(m, dtype=np.float64))
    return float(f) if f.ndim == 0 else f


@dataclass(frozen=True)
class Partial:
    freq: float
    amp: float = 1.0

    def __post_init__(self):
        if not self.freq > 0:
            raise ValueError(f"partial frequency must be positive, got {self.freq}")
        if not self.amp >= 0:
            raise ValueError(f"partial amplitude must be non-negative, got {self.amp}")


@dataclass(frozen=True)
class LinearSpectrum:
    """Power density sampled on a strictly increasing linear frequency axis."""

    freqs: np.ndarray
    density: np.ndarray

    def __post_init__(self):
        f = _frozen(self.freqs)
        d = _frozen(self.density)
        if f.ndim != 1 or f.shape != d.shape:
            raise ValueError("freqs and density must be 1-D arrays of equal length")
        if len(f) > 1 and np.any(np.diff(f) <= 0):
            raise ValueError("freqs must be strictly increasing")
        if np.any(~(d >= 0)):
            raise ValueError("density must be non-negative and finite")
        object.__setattr__(self, "freqs", f)
        object.__setattr__(self, "density", d)

    def __len__(self):
        return len(self.density)

    def with_density(self, density):
        return LinearSpectrum(self.freqs, density)


@dataclass(frozen=True)
class LogSpectrum:
    """Power density on a :class:`LogGrid`."""

    grid: LogGrid
    density: np.ndarray = field(repr=False)

    def __post_init__(self):
        d = _frozen(self.density)
        if d.shape != (self.grid.size,):
            raise ValueError(
                f"density length {d.shape} does not match grid size {self.grid.size}"
            )
        if np.any(~(d >= 0)):
            raise ValueError("density must be non-negative and finite")
        object.__setattr__(self, "density", d)

    def __len__(self):
        return len(self.density)

    @property
    def freqs(self):
        return self.grid.freqs

    def with_density(self, density):
        return LogSpectrum(self.grid, density)


def strict_normalize(s):
    """Scale ``s`` so its bins sum to one."""
    total = float(np.sum(s.density))
    if not total > 0:
        raise DegenerateSpectrumError("degenerate spectrum: no positive bin")
    return s.with_density(s.density / total)


def mean_value(s):
    if len(s.density) == 0:
        raise ValueError("mean of an empty spectrum")
    return float(np.mean(s.density))


def expected_mel(s):
    """Mean of the bin position in octaves under the normalized density."""
    d = strict_normalize(s).density
    return float(np.dot(s.grid.centers, d))


def expected_freq(s):
    """Mean linear frequency (Hz) under the normalized log-grid density."""
    d = strict_normalize(s).density
    return float(np.dot(s.freqs, d))


def gaussian_partials(partials, sigma_semitones, grid=DEFAULT_GRID):
    """Sum of Gaussian bumps in log frequency, one per partial.

    Each partial contributes ``amp * exp(-(m - m_j)**2 / (2 sigma**2))`` with
    ``sigma = sigma_semitones / 12`` octaves. Mass falling outside the grid
    is dropped and a :class:`GridRangeWarning` is issued.
    """
    partials = list(partials)
    if not partials:
        raise ValueError("at least one partial is required")
    if not sigma_semitones > 0:
        raise ValueError("sigma_semitones must be positive")
    sigma = sigma_semitones / 12.0
    m = grid.centers
    top = m[-1]
    density = np.zeros(grid.size)
    for p in partials:
        mj = mel_of_freq(p.freq, grid)
        if mj - 4 * sigma < 0 or mj + 4 * sigma > top:
            warnings.warn(
                f"partial at {p.freq:g} Hz is within 4 sigma of the grid edge "
                f"({grid.omega0:g}-{grid.fmax:g} Hz); truncated",
                GridRangeWarning,
                stacklevel=2,
            )
        density += p.amp * np.exp(-((m - mj) ** 2) / (2 * sigma * sigma))
    return LogSpectrum(grid, density)
