"""Command-line interface: ``maspitch <command> ...``.

Every command writes CSV (header row first, numbers with 6 significant
digits) to ``--out`` or stdout. Exit codes: 0 success, 2 invalid input,
3 I/O failure, 4 degenerate (silent) signal.
"""

import argparse
import csv
import io
import sys
import warnings

import numpy as np

from . import baselines, consonance, synth
from .masp import CONSONANCE_PARAMS, MaspParams, masp_spectrogram
from .spectra import (
    CONSONANCE_GRID,
    DEFAULT_GRID,
    DegenerateSpectrumError,
    LogGrid,
    Partial,
)
from .transform import CqtParams, cqt_power_spectrogram, spectrogram_of_partials

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_IO = 3
EXIT_DEGENERATE = 4


def fmt(x):
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        return format(float(x), ".6g")
    return str(x)


def _write_csv(path, header, rows):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([fmt(v) for v in row])
    text = buf.getvalue()
    if path is None or path == "-":
        sys.stdout.write(text)
        return
    try:
        with open(path, "w", newline="") as fh:
            fh.write(text)
    except OSError as e:
        raise OSError(f"cannot write {path}: {e.strerror or e}") from e


def _float_list(text):
    try:
        return [float(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def _int_list(text):
    try:
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _partial_list(text):
    """``"930,1770"`` (unit power) or ``"930:1,1770:0.5"``."""
    out = []
    for tok in text.split(","):
        tok = tok.strip()
        if not tok:
            continue
        f, _, a = tok.partition(":")
        try:
            out.append(Partial(float(f), float(a) if a else 1.0))
        except ValueError as e:
            raise argparse.ArgumentTypeError(str(e))
    return out


def read_wav(path):
    """Mono float samples in [-1, 1) and the sample rate; stereo is averaged."""
    from scipy.io import wavfile

    try:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", wavfile.WavFileWarning)
            sr, data = wavfile.read(path)
    except FileNotFoundError as e:
        raise OSError(f"cannot read {path}: no such file") from e
    except (ValueError, EOFError) as e:
        raise OSError(f"cannot read {path}: not a PCM WAV file ({e})") from e
    if data.dtype == np.int16:
        x = data / 32768.0
    elif data.dtype == np.int32:
        # 24-bit files are returned left-aligned in int32
        x = data / 2147483648.0
    elif data.dtype == np.uint8:
        x = (data.astype(np.float64) - 128) / 128.0
    elif data.dtype.kind == "f":
        x = data.astype(np.float64)
    else:
        raise OSError(f"cannot read {path}: unsupported sample type {data.dtype}")
    if x.ndim == 2:
        warnings.warn(f"{path}: {x.shape[1]} channels averaged to mono", stacklevel=2)
        x = x.mean(axis=1)
    return np.asarray(x, dtype=np.float64), float(sr)


def write_wav(path, pcm, sample_rate):
    """16-bit PCM; the signal is peak-normalized to 0.9 full scale."""
    from scipy.io import wavfile

    if int(sample_rate) != sample_rate:
        raise ValueError("WAV output needs an integer sample rate")
    peak = float(np.max(np.abs(pcm))) if len(pcm) else 0.0
    scaled = pcm * (0.9 / peak) if peak > 0 else pcm
    data = np.round(scaled * 32767).astype(np.int16)
    try:
        wavfile.write(path, int(sample_rate), data)
    except OSError as e:
        raise OSError(f"cannot write {path}: {e.strerror or e}") from e


def _grid_args(p, default):
    g = p.add_argument_group("grid")
    g.add_argument("--omega0", type=float, default=default.omega0, help="bin 0 frequency (Hz)")
    g.add_argument("--bins-per-octave", type=int, default=default.bins_per_octave)
    g.add_argument("--octaves", type=int, default=default.n_octaves)


def _masp_args(p, default):
    g = p.add_argument_group("MASP")
    g.add_argument("--b", type=float, default=default.b, help="smoothing exponent")
    g.add_argument("--n", type=int, default=default.n, help="number of subharmonic factors")


def _grid(a):
    return LogGrid(a.omega0, a.bins_per_octave, a.octaves)


def _masp(a):
    return MaspParams(a.b, a.n, getattr(a, "voicing_threshold", None))


def _signal_args(p):
    p.add_argument("--kind", choices=synth.SignalSpec.KINDS, default="sawtooth")
    p.add_argument("--f0", type=float, default=100.0)
    p.add_argument("--remove", type=_int_list, default=[], help="harmonics to drop, e.g. 1,2")
    p.add_argument("--partials", type=_partial_list, default=[],
                   help="custom partials: freq[:power],... (Hz)")
    p.add_argument("--n-partials", type=int, default=None)


def _signal_spec(a, **extra):
    return synth.SignalSpec(
        kind=a.kind,
        f0=a.f0,
        removed_harmonics=frozenset(a.remove),
        custom_partials=tuple(a.partials),
        n_partials=a.n_partials,
        **extra,
    )


def cmd_synth(a):
    glide = tuple(a.glissando) if a.glissando else None
    if glide is not None and len(glide) != 2:
        raise ValueError("--glissando takes start,end in semitones")
    spec = _signal_spec(a, duration=a.duration, sample_rate=a.sample_rate,
                        glissando=glide, template=a.template)
    write_wav(a.out, spec.render(), spec.sample_rate)


def cmd_analyze(a):
    pcm, sr = read_wav(a.input)
    params = CqtParams(_grid(a), a.hop, a.filter_scale, sr)
    spec = cqt_power_spectrogram(pcm, params)
    results, track = masp_spectrogram(spec, _masp(a))
    rows = zip(track.times, track.f0, track.confidence, track.voiced)
    _write_csv(a.out, ["time_s", "f0_hz", "confidence", "voiced"], rows)
    if a.matrix:
        header = [fmt(f) for f in spec.grid.freqs]
        _write_csv(a.matrix, header, (r.pitch_spectrum.density for r in results))


def cmd_intervals(a):
    rows = consonance.interval_table(a.base, a.sigma, _grid(a), _masp(a))
    _write_csv(a.out, ["name", "steps_or_ratio", "h"], rows)


def cmd_chords(a):
    grid, params = _grid(a), _masp(a)
    rows = consonance.chord_table(a.base, a.sigma, grid, params)
    _write_csv(a.out, ["chord", "offsets", "h"],
               ((n, " ".join(str(o) for o in offs), h) for n, offs, h in rows))
    if a.grid_out:
        cg = consonance.chord_grid(a.base, (0.0, a.max_offset), step=a.step,
                                   sigma_semitones=a.sigma, grid=grid, params=params)
        header = ["y_st\\x_st"] + [fmt(x) for x in cg.x_axis]
        _write_csv(a.grid_out, header,
                   ([y] + list(row) for y, row in zip(cg.y_axis, cg.h)))


def cmd_hcurve(a):
    grid, params = _grid(a), _masp(a)
    glide = a.mode == "h-shift"
    if a.start is None:
        a.start = -1.0 if glide else 0.0
    if a.stop is None:
        a.stop = 13.0 if glide else 12.0
    if not a.step > 0 or not a.rate > 0:
        raise ValueError("--step and --rate must be positive")
    if a.start >= a.stop:
        raise ValueError("--start must be below --stop")
    if a.mode == "h-ratio":
        n = int(round((a.stop - a.start) / a.step))
        offsets = np.round(a.start + a.step * np.arange(n + 1), 10)
        curve = consonance.interval_sweep(a.base, offsets=offsets, sigma_semitones=a.sigma,
                                          grid=grid, params=params)
        _write_csv(a.out, ["offset_st", "h"], zip(curve.axis, curve.h_values))
        return
    duration = (a.stop - a.start) / a.rate
    track = synth.glissando_pair(a.base, a.start, a.stop, duration, a.step / a.rate)
    cqt = CqtParams(grid, sample_rate=max(44100.0, 4 * grid.fmax))
    spec = spectrogram_of_partials(track, cqt, a.sigma)
    curve = consonance.glissando_h_track(spec, params)
    _write_csv(a.out, ["time_s", "offset_st", "h"], zip(curve.axis, track.offsets, curve.h_values))


def cmd_baseline(a):
    spec = _signal_spec(a)
    partials = spec.partials()
    freqs = [p.freq for p in partials]
    if a.model == "gcd":
        rows = [("gcd", baselines.gcd_pitch(freqs, a.quantum))]
    elif a.model == "spacing":
        rows = [("spacing", baselines.spacing_pitch(freqs))]
    elif a.model == "lowest":
        rows = [("lowest", baselines.lowest_partial(freqs))]
    elif a.model == "hps":
        axis = baselines.uniform_axis(max(freqs) * 1.05, a.resolution)
        X = baselines.line_spectrum(partials, axis)
        rows = [("hps", baselines.hps_pitch(X, a.harmonics))]
    else:
        hist = baselines.subharmonic_histogram(partials, a.harmonics, a.resolution)
        rows = [("histogram", hist.pitch())]
    _write_csv(a.out, ["model", "pitch_hz"], rows)


def build_parser():
    parser = argparse.ArgumentParser(prog="maspitch", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("synth", help="render a test signal to a 16-bit WAV")
    _signal_args(p)
    p.add_argument("--duration", type=float, default=2.0)
    p.add_argument("--sample-rate", type=float, default=44100.0)
    p.add_argument("--glissando", type=_float_list, default=None,
                   help="start,end offsets (semitones) for kind glissando_pair")
    p.add_argument("--template", choices=("pure", "sawtooth"), default="pure")
    p.add_argument("-o", "--out", required=True)
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("analyze", help="pitch track of a WAV file")
    p.add_argument("input")
    _grid_args(p, DEFAULT_GRID)
    _masp_args(p, MaspParams())
    p.add_argument("--voicing-threshold", type=float, default=None)
    p.add_argument("--hop", type=float, default=0.05, help="hop size (s)")
    p.add_argument("--filter-scale", type=float, default=0.5)
    p.add_argument("-o", "--out", default=None)
    p.add_argument("--matrix", default=None, help="also write the MASP matrix CSV here")
    p.set_defaults(func=cmd_analyze)

    for name, func, helptext in (
        ("intervals", cmd_intervals, "H for the two-tone interval table"),
        ("chords", cmd_chords, "H for the three-tone chord table"),
        ("hcurve", cmd_hcurve, "H as a function of interval"),
    ):
        p = sub.add_parser(name, help=helptext)
        _grid_args(p, CONSONANCE_GRID)
        _masp_args(p, CONSONANCE_PARAMS)
        p.add_argument("--base", type=float, default=440.0)
        p.add_argument("--sigma", type=float, default=consonance.DEFAULT_SIGMA,
                       help="partial width (semitones)")
        p.add_argument("-o", "--out", default=None)
        p.set_defaults(func=func)
        if name == "chords":
            p.add_argument("--grid-out", default=None, help="also write the chord grid CSV here")
            p.add_argument("--step", type=float, default=0.1)
            p.add_argument("--max-offset", type=float, default=12.0)
        if name == "hcurve":
            p.add_argument("--mode", choices=("h-ratio", "h-shift"), default="h-ratio")
            p.add_argument("--start", type=float, default=None,
                           help="first offset (st); default 0, or -1 for h-shift")
            p.add_argument("--stop", type=float, default=None,
                           help="last offset (st); default 12, or 13 for h-shift")
            p.add_argument("--step", type=float, default=0.05)
            p.add_argument("--rate", type=float, default=1.0,
                           help="glissando speed for h-shift (semitones/s)")

    p = sub.add_parser("baseline", help="pitch from a classical model")
    p.add_argument("model", choices=("hps", "histogram", "gcd", "spacing", "lowest"))
    _signal_args(p)
    p.add_argument("--quantum", type=float, default=1.0, help="gcd quantum (Hz)")
    p.add_argument("--resolution", type=float, default=1.0,
                   help="hps axis / histogram bin width (Hz)")
    p.add_argument("--harmonics", type=int, default=5, help="hps factors / histogram divisors")
    p.add_argument("-o", "--out", default=None)
    p.set_defaults(func=cmd_baseline)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        args.func(args)
    except DegenerateSpectrumError as e:
        print(f"maspitch: degenerate signal: {e}", file=sys.stderr)
        return EXIT_DEGENERATE
    except ValueError as e:
        print(f"maspitch: {e}", file=sys.stderr)
        return EXIT_INVALID
    except OSError as e:
        print(f"maspitch: {e}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
