import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from maspitch.baselines import gcd_pitch
from maspitch.spectra import Partial
from maspitch.synth import (
    AMBIGUOUS_COMPLEX_HZ,
    SHIFTED_COMPLEX_HZ,
    SignalSpec,
    ambiguous_complex,
    constant_track,
    glissando_pair,
    inharmonic_shifted_complex,
    render_pcm,
    sawtooth_partials,
    square_partials,
    vibrato_track,
)


def freqs(ps):
    return [p.freq for p in ps]


class TestGenerators:
    def test_sawtooth(self):
        ps = sawtooth_partials(100, 5)
        assert freqs(ps) == [100, 200, 300, 400, 500]
        assert [p.amp for p in ps] == pytest.approx([1, 1 / 4, 1 / 9, 1 / 16, 1 / 25])
        assert freqs(sawtooth_partials(100, 16, {1, 2}))[0] == 300
        assert len(sawtooth_partials(100, 1)) == 1

    def test_square(self):
        assert freqs(square_partials(100, 7)) == [100, 300, 500, 700]
        ps = square_partials(100, 16, {1})
        assert freqs(ps)[0] == 300
        assert set(np.diff(freqs(ps))) == {200}

    def test_errors(self):
        with pytest.raises(ValueError):
            sawtooth_partials(100, 2, {1, 2})
        with pytest.raises(ValueError):
            sawtooth_partials(100, 0)
        with pytest.raises(ValueError):
            square_partials(-1, 3)

    def test_shifted_complex(self):
        ps = inharmonic_shifted_complex()
        assert freqs(ps) == list(SHIFTED_COMPLEX_HZ)
        assert {p.amp for p in ps} == {1.0}
        assert gcd_pitch(freqs(ps)) == 30
        assert [abs(f - 900 * (i + 1)) for i, f in enumerate(freqs(ps))] == [30] * 6

    def test_ambiguous_complex(self):
        ps = ambiguous_complex()
        assert freqs(ps) == list(AMBIGUOUS_COMPLEX_HZ)
        assert set(np.diff(freqs(ps))) == {200}

    def test_ambiguous_not_harmonic(self):
        f = np.array(AMBIGUOUS_COMPLEX_HZ)
        for f0 in np.arange(50.5, 1000.0, 0.25):
            h = f / f0
            if np.all(np.abs(h - np.round(h)) / np.round(h) < 0.01):
                # only exact divisors of 100 Hz fit, and those are <= 100 Hz
                assert f0 <= 100.0 * 1.01

    def test_deterministic(self):
        assert sawtooth_partials(123.0, 9, {3}) == sawtooth_partials(123.0, 9, {3})


class TestGlissando:
    def test_endpoints(self):
        tr = glissando_pair(440.0)
        assert tr.offsets[0] == -1 and tr.offsets[-1] == 13
        i0 = int(np.argmin(np.abs(tr.offsets)))
        assert tr.steps[i0][1].freq == pytest.approx(440.0)
        i12 = int(np.argmin(np.abs(tr.offsets - 12)))
        assert tr.steps[i12][1].freq == pytest.approx(880.0)

    def test_rate_one_semitone_per_second(self):
        tr = glissando_pair()
        assert np.allclose(np.diff(tr.offsets) / np.diff(tr.times), 1.0)

    def test_template(self):
        tr = glissando_pair(template=lambda f: sawtooth_partials(f, 3))
        assert len(tr.steps[0]) == 6

    def test_invalid(self):
        with pytest.raises(ValueError):
            glissando_pair(duration=0)


class TestRender:
    def test_rms(self):
        x = render_pcm([Partial(441.0, 0.25)], 44100.0, 1.0)
        assert np.sqrt(np.mean(x ** 2)) == pytest.approx(0.5 / np.sqrt(2), rel=1e-6)
        assert x[0] == 0.0

    def test_errors(self):
        with pytest.raises(ValueError):
            render_pcm([Partial(440.0)], 44100.0, 0.0)
        with pytest.raises(ValueError):
            render_pcm([Partial(12000.0)], 44100.0, 1.0)

    @given(st.lists(st.floats(50, 5000), min_size=1, max_size=3),
           st.lists(st.floats(50, 5000), min_size=1, max_size=3))
    def test_linearity(self, fa, fb):
        A = [Partial(f, 0.5) for f in fa]
        B = [Partial(f, 2.0) for f in fb]
        both = render_pcm(A + B, 22050.0, 0.05)
        assert np.allclose(both, render_pcm(A, 22050.0, 0.05) + render_pcm(B, 22050.0, 0.05),
                           rtol=0, atol=1e-9)

    def test_track_constant_matches_static(self):
        ps = sawtooth_partials(200, 4)
        a = render_pcm(constant_track(ps, 0.5), 44100.0)
        b = render_pcm(ps, 44100.0, 0.5)
        assert np.allclose(a, b, atol=1e-8)

    def test_glissando_phase_continuity(self):
        sr = 8000.0
        tr = glissando_pair(440.0, duration=14.0, step=0.01)
        x = render_pcm(tr, sr, 14.0)
        # a unit sinusoid cannot move more than 2*pi*f/sr per sample
        fmax = tr.max_freq()
        assert np.max(np.abs(np.diff(x))) <= 2 * (2 * np.pi * fmax / sr) + 1e-9

    def test_vibrato_range(self):
        tr = vibrato_track([Partial(440.0)], 1.0)
        f = np.array([s[0].freq for s in tr.steps])
        assert f.max() == pytest.approx(440 * 2 ** (0.2 / 12), rel=1e-4)
        assert f.min() == pytest.approx(440 * 2 ** (-0.2 / 12), rel=1e-4)


class TestSignalSpec:
    def test_default_partial_count(self):
        assert SignalSpec(f0=100).default_partial_count(100) == 16
        assert SignalSpec(f0=1000).default_partial_count(1000) == 11
        assert SignalSpec(f0=1000).default_partial_count(1000, ceiling_hz=4000) == 4

    def test_render_kinds(self):
        assert len(SignalSpec(duration=0.1).render()) == 4410
        assert len(SignalSpec("custom", custom_partials=(Partial(500.0),), duration=0.1).render()) == 4410
        assert len(SignalSpec("glissando_pair", f0=440.0, duration=1.0).render()) == 44100

    @pytest.mark.parametrize("kw", [dict(kind="noise"), dict(duration=0), dict(f0=0),
                                    dict(kind="custom"), dict(sample_rate=-1)])
    def test_invalid(self, kw):
        with pytest.raises(ValueError):
            SignalSpec(**kw)

    def test_removed(self):
        s = SignalSpec("square", f0=100, removed_harmonics=frozenset({1}))
        assert s.partials()[0].freq == 300
