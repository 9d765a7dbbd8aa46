import math
import warnings

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from maspitch.spectra import (
    C1_HZ,
    DEFAULT_GRID,
    DegenerateSpectrumError,
    GridRangeWarning,
    LinearSpectrum,
    LogGrid,
    LogSpectrum,
    Partial,
    expected_freq,
    expected_mel,
    freq_of_mel,
    gaussian_partials,
    mean_value,
    mel_of_freq,
    strict_normalize,
)

# zeros or normal (non-subnormal) magnitudes, so scaling cannot flush to zero
densities = arrays(np.float64, st.integers(2, 64),
                   elements=st.one_of(st.just(0.0), st.floats(1e-100, 1e6))).filter(lambda d: d.sum() > 0)


def spec(values, grid=None):
    values = np.asarray(values, dtype=float)
    grid = grid or LogGrid(100.0, 1, len(values))
    return LogSpectrum(grid, values)


class TestGrid:
    def test_defaults(self):
        g = DEFAULT_GRID
        assert (g.omega0, g.bins_per_octave, g.n_octaves) == (C1_HZ, 48, 8)
        assert g.size == len(g) == 384
        assert 8200 < g.fmax < 8400

    def test_centers_uniform(self):
        d = np.diff(DEFAULT_GRID.centers)
        assert np.all(d > 0)
        assert np.allclose(d, 1 / 48, rtol=0, atol=1e-15)

    def test_arrays_read_only(self):
        with pytest.raises(ValueError):
            DEFAULT_GRID.freqs[0] = 1.0

    @pytest.mark.parametrize("kw", [dict(omega0=0), dict(bins_per_octave=0),
                                    dict(n_octaves=-1), dict(bins_per_octave=1.5)])
    def test_invalid(self, kw):
        with pytest.raises(ValueError):
            LogGrid(**kw)

    def test_shift_of(self):
        assert DEFAULT_GRID.shift_of(1) == 0
        assert DEFAULT_GRID.shift_of(2) == 48
        # log2(3) * 48 = 76.08
        assert DEFAULT_GRID.shift_of(3) == 76


class TestMel:
    def test_identity_and_octave(self):
        g = LogGrid(32.7, 48, 8)
        assert mel_of_freq(32.7, g) == 0
        assert mel_of_freq(65.4, g) == pytest.approx(1, abs=1e-15)

    def test_a4(self):
        # log2(440/32.7) from mpmath at 30 digits
        assert mel_of_freq(440.0, LogGrid(32.7)) == pytest.approx(3.75014098291394, abs=1e-12)

    def test_freq_of_mel(self):
        assert freq_of_mel(0, LogGrid(100.0)) == 100.0
        assert freq_of_mel(1, LogGrid(100.0)) == 200.0
        assert freq_of_mel(7 / 12, LogGrid(440.0)) == pytest.approx(659.255113825739, rel=1e-12)

    @pytest.mark.parametrize("w", [0.0, -1.0, float("nan")])
    def test_domain(self, w):
        with pytest.raises(ValueError):
            mel_of_freq(w, DEFAULT_GRID)

    @given(st.floats(C1_HZ, 8000.0))
    def test_round_trip(self, w):
        assert freq_of_mel(mel_of_freq(w, DEFAULT_GRID), DEFAULT_GRID) == pytest.approx(w, rel=1e-9)

    def test_vectorized(self):
        f = DEFAULT_GRID.freqs
        assert np.allclose(mel_of_freq(f, DEFAULT_GRID), DEFAULT_GRID.centers, atol=1e-12)


class TestSpectrumTypes:
    def test_log_length_mismatch(self):
        with pytest.raises(ValueError):
            LogSpectrum(LogGrid(100.0, 1, 4), np.ones(3))

    def test_negative_density(self):
        with pytest.raises(ValueError):
            spec([1, -1])

    def test_linear_needs_increasing_freqs(self):
        with pytest.raises(ValueError):
            LinearSpectrum([1.0, 1.0], [0, 1])

    def test_partial(self):
        with pytest.raises(ValueError):
            Partial(0.0)
        with pytest.raises(ValueError):
            Partial(10.0, -1)

    def test_immutable(self):
        s = spec([1, 2])
        with pytest.raises(ValueError):
            s.density[0] = 5


class TestNormalization:
    @pytest.mark.parametrize("values,expected", [
        ([1, 1, 1, 1], [0.25] * 4),
        ([0, 2, 0, 0], [0, 1, 0, 0]),
        ([1, 3], [0.25, 0.75]),
    ])
    def test_examples(self, values, expected):
        assert np.allclose(strict_normalize(spec(values)).density, expected, rtol=0, atol=1e-15)

    def test_linear(self):
        s = strict_normalize(LinearSpectrum([1.0, 2.0], [1.0, 3.0]))
        assert isinstance(s, LinearSpectrum)
        assert np.allclose(s.density, [0.25, 0.75])

    def test_degenerate(self):
        with pytest.raises(DegenerateSpectrumError):
            strict_normalize(spec([0, 0, 0]))

    @given(densities)
    def test_idempotent(self, d):
        once = strict_normalize(spec(d))
        twice = strict_normalize(once)
        assert abs(once.density.sum() - 1) <= 1e-12
        assert np.allclose(once.density, twice.density, rtol=0, atol=1e-12)


class TestMoments:
    @pytest.mark.parametrize("values,mean", [([1, 1, 1], 1), ([0, 0, 4, 0], 1), ([2, 4, 6], 4)])
    def test_mean(self, values, mean):
        assert mean_value(spec(values)) == mean

    def test_expected_mel(self):
        assert expected_mel(spec([0, 0, 1, 0])) == 2
        assert expected_mel(spec([0, 1, 0, 1])) == 2
        assert expected_mel(spec([1, 3])) == 0.75

    def test_expected_freq(self):
        # grid 100, 200, 400, 800 Hz
        assert expected_freq(spec([0, 0, 1, 0])) == pytest.approx(400)
        assert expected_freq(spec([1, 0, 0, 0], LogGrid(440.0, 1, 4))) == pytest.approx(440)
        assert expected_freq(spec([1, 1, 2, 0])) == pytest.approx(275)
        assert expected_freq(spec([1, 0, 1, 0], LogGrid(100.0, 2, 2))) == pytest.approx(150)

    def test_degenerate(self):
        with pytest.raises(DegenerateSpectrumError):
            expected_mel(spec([0, 0]))
        with pytest.raises(DegenerateSpectrumError):
            expected_freq(spec([0, 0]))

    @given(densities, st.floats(1e-6, 1e6))
    def test_scale_invariance(self, d, c):
        g = LogGrid(100.0, 1, len(d))
        a, b = LogSpectrum(g, d), LogSpectrum(g, d * c)
        assert expected_mel(a) == pytest.approx(expected_mel(b), rel=1e-12, abs=1e-12)
        assert expected_freq(a) == pytest.approx(expected_freq(b), rel=1e-12)


class TestGaussianPartials:
    def test_peak_on_bin(self):
        g = DEFAULT_GRID
        f = g.freqs[200]
        F = gaussian_partials([Partial(f, 1.0)], 0.1, g)
        assert F.density[200] == pytest.approx(1.0, abs=1e-12)
        assert np.argmax(F.density) == 200

    def test_neighbour_ratio(self):
        g = LogGrid(440.0 / 2 ** 3, 48, 6)
        F = gaussian_partials([Partial(440.0)], 0.1, g)
        i = g.index_of(440.0)
        # exp(-(0.25)**2 / (2 * 0.1**2)) = exp(-3.125)
        assert F.density[i + 1] / F.density[i] == pytest.approx(math.exp(-3.125), rel=1e-9)
        assert math.exp(-3.125) == pytest.approx(0.0439369, rel=1e-6)

    def test_split_partials(self):
        a = gaussian_partials([Partial(440.0, 0.5), Partial(440.0, 0.5)], 0.1)
        b = gaussian_partials([Partial(440.0, 1.0)], 0.1)
        assert np.allclose(a.density, b.density, rtol=0, atol=1e-15)

    @given(st.lists(st.floats(60, 4000), min_size=1, max_size=4),
           st.lists(st.floats(60, 4000), min_size=1, max_size=4))
    def test_additive(self, fa, fb):
        A = [Partial(f) for f in fa]
        B = [Partial(f) for f in fb]
        ab = gaussian_partials(A + B, 0.1).density
        assert np.allclose(ab, gaussian_partials(A, 0.1).density + gaussian_partials(B, 0.1).density,
                           rtol=1e-12, atol=1e-15)

    def test_edge_warning(self):
        with pytest.warns(GridRangeWarning):
            F = gaussian_partials([Partial(C1_HZ)], 0.5)
        assert F.density[0] == pytest.approx(1.0)

    def test_no_warning_inside(self):
        with warnings.catch_warnings():
            warnings.simplefilter("error")
            gaussian_partials([Partial(440.0)], 0.1)

    def test_errors(self):
        with pytest.raises(ValueError):
            gaussian_partials([], 0.1)
        with pytest.raises(ValueError):
            gaussian_partials([Partial(440.0)], 0.0)
