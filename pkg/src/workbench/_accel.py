"""Numba switch shared by the hot kernels.

Set ``WORKBENCH_NO_NUMBA=1`` to force the pure-numpy paths.  Numba is also
skipped silently when it cannot be imported.
"""
import os

_flag = os.environ.get("WORKBENCH_NO_NUMBA", "").strip().lower()

try:
    from numba import njit as _njit
    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    _njit = None
    HAVE_NUMBA = False

USE_NUMBA = HAVE_NUMBA and _flag in ("", "0", "false", "no")


def jit(fn):
    """Compile ``fn`` with numba when available, else return it untouched."""
    if not HAVE_NUMBA:
        return fn
    return _njit(cache=True)(fn)
