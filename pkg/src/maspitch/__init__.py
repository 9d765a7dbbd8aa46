"""MASP pitch spectra and the harmonicity measure H."""

from .consonance import (
    ChordGrid,
    HarmonicityResult,
    HCurve,
    ToneSpec,
    chord_grid,
    glissando_h_track,
    harmonicity_ratio,
    harmonicity_shift,
    interval_sweep,
    joint_masp,
    joint_spectrum,
)
from .kernels import BACKEND
from .masp import (
    CONSONANCE_PARAMS,
    MaspParams,
    MaspResult,
    Pitch,
    PitchTrack,
    masp_frame,
    masp_spectrogram,
    masp_spectrum,
    smoothing_weight,
    subharmonic_factor,
)
from .spectra import (
    CONSONANCE_GRID,
    DEFAULT_GRID,
    DegenerateSpectrumError,
    GridMismatchError,
    GridRangeWarning,
    LinearSpectrum,
    LogGrid,
    LogSpectrum,
    Partial,
    expected_freq,
    expected_mel,
    gaussian_partials,
    strict_normalize,
)
from .transform import CqtParams, LogSpectrogram, cqt_power_spectrogram, spectrogram_of_partials

__version__ = "0.1.0"
