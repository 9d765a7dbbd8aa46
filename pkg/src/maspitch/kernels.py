"""Kernel backend selection.

The compiled extension is used when it imported cleanly and
``MASP_PURE_PYTHON`` is unset; otherwise the numpy fallback is used.
``MASP_THREADS`` caps the OpenMP thread count of the compiled kernels.
"""

import os

from . import _kernels_py

try:
    from . import _kernels as _compiled
except ImportError:  # extension not built
    _compiled = None

if _compiled is not None and not os.environ.get("MASP_PURE_PYTHON"):
    _impl = _compiled
    BACKEND = "compiled"
else:
    _impl = _kernels_py
    BACKEND = "python"


def n_threads():
    env = os.environ.get("MASP_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            pass
    return os.cpu_count() or 1


def get_backend(name=None):
    """Return the kernel module named ``"compiled"`` or ``"python"``.

    ``None`` returns the module selected at import.
    """
    if name is None:
        return _impl
    if name == "python":
        return _kernels_py
    if name == "compiled":
        if _compiled is None:
            raise ImportError("compiled kernels are not built")
        return _compiled
    raise ValueError(f"unknown backend {name!r}")


def cqt_power(*args):
    return _impl.cqt_power(*args, n_threads())


def masp_product(*args):
    return _impl.masp_product(*args, n_threads())


def chord_h(*args):
    return _impl.chord_h(*args, n_threads())
