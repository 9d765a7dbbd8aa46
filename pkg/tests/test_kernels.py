import os
import subprocess
import sys

import numpy as np
import pytest

from maspitch import kernels
from maspitch import _kernels_py as py

compiled = pytest.importorskip("maspitch._kernels")


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


def test_selected_backend():
    assert kernels.BACKEND in ("compiled", "python")
    assert kernels.get_backend("python") is py
    assert kernels.get_backend("compiled") is compiled
    with pytest.raises(ValueError):
        kernels.get_backend("fortran")


def test_threads_env(monkeypatch):
    monkeypatch.setenv("MASP_THREADS", "3")
    assert kernels.n_threads() == 3
    monkeypatch.setenv("MASP_THREADS", "junk")
    assert kernels.n_threads() >= 1


def test_pure_python_switch():
    env = dict(os.environ, MASP_PURE_PYTHON="1")
    out = subprocess.run([sys.executable, "-c", "import maspitch; print(maspitch.BACKEND)"],
                         env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "python"


def test_cqt_parity(rng):
    x = rng.standard_normal(5000)
    lengths = np.array([400, 250, 97, 31], dtype=np.intp)
    offsets = np.concatenate([[0], np.cumsum(lengths)[:-1]]).astype(np.intp)
    re = rng.standard_normal(lengths.sum())
    im = rng.standard_normal(lengths.sum())
    for hop, frames in ((100, 50), (333, 16), (1, 7)):
        a = py.cqt_power(x, re, im, offsets, lengths, hop, frames, 1)
        for t in (1, 4):
            b = compiled.cqt_power(x, re, im, offsets, lengths, hop, frames, t)
            assert np.allclose(a, b, rtol=1e-12, atol=1e-12)


@pytest.mark.parametrize("n", [1, 5, 32])
def test_masp_product_parity(rng, n):
    F = rng.random((6, 200))
    F[2] = 0.0
    shifts = np.array([int(np.floor(np.log2(k) * 24 + 0.5)) for k in range(1, n + 1)], dtype=np.intp)
    weights = 1 / (1 + np.arange(1, n + 1) ** 0.5)
    means = F.mean(axis=1)
    pads = F.min(axis=1)
    a = py.masp_product(F, shifts, weights, means, pads, 1)
    b = compiled.masp_product(F, shifts, weights, means, pads, 4)
    assert np.allclose(a, b, rtol=1e-13, atol=0)


def test_masp_product_shift_past_end(rng):
    F = rng.random((2, 10))
    shifts = np.array([0, 50], dtype=np.intp)
    w = np.array([0.5, 0.3])
    a = py.masp_product(F, shifts, w, F.mean(1), F.min(1), 1)
    b = compiled.masp_product(F, shifts, w, F.mean(1), F.min(1), 1)
    assert np.allclose(a, b, rtol=1e-14)


def test_chord_parity(rng):
    Y = rng.random((12, 300)) + 1e-3
    X = rng.random((12, 300))
    Y /= Y.sum(1, keepdims=True)
    X /= X.sum(1, keepdims=True)
    f = np.geomspace(20, 8000, 300)
    ia = rng.integers(0, 12, 40).astype(np.intp)
    ib = rng.integers(0, 12, 40).astype(np.intp)
    a = py.chord_h(Y, X, f, 3, ia, ib, 1)
    b = compiled.chord_h(Y, X, f, 3, ia, ib, 4)
    assert np.allclose(a, b, rtol=1e-12)
    # index order does not matter
    c = compiled.chord_h(Y, X, f, 3, ib, ia, 2)
    assert np.array_equal(b, c)
