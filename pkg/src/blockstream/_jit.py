"""Selects between numba-compiled kernels and the interpreted fallback.

Set ``BLOCKSTREAM_DISABLE_JIT=1`` before import to run every kernel as plain
Python over numpy arrays. Without numba installed the fallback is used
automatically.
"""
from __future__ import annotations

import os

_FLAG = "BLOCKSTREAM_DISABLE_JIT"


def _disabled() -> bool:
    return os.environ.get(_FLAG, "").strip().lower() not in ("", "0", "false", "no")


try:
    if _disabled():
        raise ImportError
    from numba import njit as _njit
except ImportError:
    _njit = None

JIT_ENABLED = _njit is not None


def helper(fn):
    """Compile a kernel-internal helper; interpreted helpers run bare."""
    if _njit is None:
        return fn
    return _njit(cache=True, nogil=True)(fn)


def kernel(fn):
    """Compile an entry-point kernel; the raw function stays on ``.py_func``."""
    if _njit is None:
        run = _quiet(fn)
        run.py_func = fn
        return run
    return _njit(cache=True, nogil=True)(fn)


def _quiet(raw):
    # unsigned 64-bit kernels rely on wrap-around, which numpy scalars report
    # as an overflow even though the result is the intended one
    import numpy as np

    def run(*args):
        with np.errstate(over="ignore"):
            return raw(*args)

    run.__name__ = raw.__name__
    run.__qualname__ = raw.__qualname__
    run.__doc__ = raw.__doc__
    return run


def interpreted(k):
    """The uncompiled body of kernel ``k``, callable regardless of the JIT setting."""
    return _quiet(k.py_func)
