"""Optional numba acceleration.

Kernels are written once against numpy arrays and decorated with :func:`njit`.
With numba installed they are compiled; with ``LLMCDG_DISABLE_JIT=1`` (or
numba missing) the same functions run as plain Python over numpy arrays.
Either way the original Python function is reachable as ``kernel.py_func``.
"""

from __future__ import annotations

import functools
import os

import numpy as np

DISABLE_ENV = "LLMCDG_DISABLE_JIT"


def jit_requested() -> bool:
    return os.environ.get(DISABLE_ENV, "").strip().lower() in ("", "0", "false", "no")


HAVE_NUMBA = False
if jit_requested():
    try:
        import numba as _numba

        HAVE_NUMBA = True
    except ImportError:  # pragma: no cover - numba is a declared dependency
        HAVE_NUMBA = False


def _quiet(fn):
    # Fixed-width wraparound is intended; numpy scalar ops would warn about it.
    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        with np.errstate(all="ignore"):
            return fn(*args, **kwargs)

    wrapper.py_func = wrapper
    return wrapper


def njit(fn=None, **options):
    options.setdefault("cache", True)
    options.setdefault("nogil", True)

    def decorate(f):
        if HAVE_NUMBA:
            return _numba.njit(**options)(f)
        return _quiet(f)

    if fn is not None:
        return decorate(fn)
    return decorate


def backend_name() -> str:
    return "numba" if HAVE_NUMBA else "numpy"
