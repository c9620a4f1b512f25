"""Kernel backend selection.

``AP3LAB_BACKEND=numpy`` forces the pure-numpy paths even when numba is
installed; anything else (or unset) uses numba when it imports cleanly.
``AP3LAB_THREADS`` caps worker threads for partitioned searches.
"""
from __future__ import annotations

import os

try:
    import numba
except ImportError:  # pragma: no cover - exercised only without numba
    numba = None

BACKEND = os.environ.get("AP3LAB_BACKEND", "numba").strip().lower()
USE_NUMBA = numba is not None and BACKEND != "numpy"


def threads() -> int:
    try:
        n = int(os.environ.get("AP3LAB_THREADS", "1"))
    except ValueError:
        n = 1
    return max(1, n)


def njit(fn):
    """numba.njit(cache=True, nogil=True) on the numba backend, identity otherwise.

    The undecorated function is always reachable as ``fn.py_func`` so the
    interpreted path can be benchmarked and tested against the compiled one.
    """
    if not USE_NUMBA:
        fn.py_func = fn
        return fn
    return numba.njit(cache=True, nogil=True)(fn)
