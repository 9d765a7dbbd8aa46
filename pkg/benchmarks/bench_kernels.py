"""Time the compiled kernels against the numpy fallback.

    python3 benchmarks/bench_kernels.py [--repeat 5] [--threads 1,4]

Inputs mirror real workloads: a 5 s CQT on the default grid, MASP over its
frames, and the default chord grid's pairwise H evaluation.
"""

import argparse
import time

import numpy as np

from maspitch import _kernels_py
from maspitch.kernels import get_backend, n_threads
from maspitch.masp import MaspParams, _factor_tables
from maspitch.spectra import CONSONANCE_GRID, DEFAULT_GRID
from maspitch.transform import CqtParams, _kernel_bank


def workloads():
    rng = np.random.default_rng(0)
    params = CqtParams()
    x = rng.standard_normal(int(5 * params.sample_rate))
    re, im, offsets, lengths = _kernel_bank(params)
    hop = params.hop_samples
    n_frames = 1 + (len(x) - 1) // hop
    cqt_args = (x, re, im, offsets, lengths, hop, n_frames)

    F = rng.random((n_frames, DEFAULT_GRID.size))
    shifts, weights = _factor_tables(DEFAULT_GRID, MaspParams(n=32))
    masp_args = (F, shifts, weights, F.mean(axis=1), F.min(axis=1))

    n_tones = 121
    Y = rng.random((n_tones, CONSONANCE_GRID.size)) + 1e-6
    X = rng.random((n_tones, CONSONANCE_GRID.size))
    Y /= Y.sum(axis=1, keepdims=True)
    X /= X.sum(axis=1, keepdims=True)
    ia, ib = np.triu_indices(n_tones)
    chord_args = (Y, X, np.ascontiguousarray(CONSONANCE_GRID.freqs), 0,
                  ia.astype(np.intp), ib.astype(np.intp))
    return {"cqt_power": cqt_args, "masp_product": masp_args, "chord_h": chord_args}


def best_of(fn, args, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn(*args)
        times.append(time.perf_counter() - t0)
    return min(times)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--threads", default=f"1,{n_threads()}",
                    help="comma-separated thread counts for the compiled backend")
    args = ap.parse_args()
    threads = sorted({int(t) for t in args.threads.split(",")})
    try:
        compiled = get_backend("compiled")
    except ImportError:
        compiled = None
        print("compiled kernels not built; timing the fallback only")

    cols = ["python"] + [f"compiled/{t}t" for t in threads] if compiled else ["python"]
    print(f"{'kernel':<14}" + "".join(f"{c:>14}" for c in cols) + f"{'speedup':>10}")
    for name, kargs in workloads().items():
        row = [best_of(getattr(_kernels_py, name), kargs + (1,), args.repeat)]
        if compiled:
            fn = getattr(compiled, name)
            row += [best_of(fn, kargs + (t,), args.repeat) for t in threads]
        speed = f"{row[0] / min(row[1:]):.1f}x" if len(row) > 1 else "-"
        print(f"{name:<14}" + "".join(f"{t * 1e3:>12.1f}ms" for t in row) + f"{speed:>10}")


if __name__ == "__main__":
    main()
