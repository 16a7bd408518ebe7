"""numba switch.

Set ``LDCRIT_NO_NUMBA=1`` to run every kernel as plain Python/numpy.  The
flag is read once at import time.
"""

import os

_DISABLED = os.environ.get("LDCRIT_NO_NUMBA", "").strip().lower() not in ("", "0", "false", "no")

try:
    if _DISABLED:
        raise ImportError
    from numba import njit as _njit
    HAVE_NUMBA = True
except ImportError:
    HAVE_NUMBA = False
    _njit = None


def njit(*args, **kwargs):
    """``numba.njit`` when enabled, otherwise the identity decorator."""
    if HAVE_NUMBA:
        return _njit(*args, **kwargs)
    if len(args) == 1 and callable(args[0]) and not kwargs:
        return args[0]

    def wrapper(f):
        return f
    return wrapper


def backend() -> str:
    return "numba" if HAVE_NUMBA else "python"
