"""Optional numba acceleration.

Set ``CHABAUTY_BOUNDS_NO_NUMBA=1`` to force the pure-numpy kernels even when
numba is importable.  The flag is read once, at import time.
"""

import os

_DISABLED = os.environ.get("CHABAUTY_BOUNDS_NO_NUMBA", "").strip().lower() in {"1", "true", "yes", "on"}

try:
    if _DISABLED:
        raise ImportError("numba disabled by environment")
    import numba
except ImportError:
    numba = None

HAVE_NUMBA = numba is not None


def njit(*args, **kwargs):
    """``numba.njit`` when available, otherwise the identity decorator."""
    if not HAVE_NUMBA:
        if len(args) == 1 and callable(args[0]) and not kwargs:
            return args[0]
        return lambda f: f
    kwargs.setdefault("cache", True)
    return numba.njit(*args, **kwargs)


def backend():
    return "numba" if HAVE_NUMBA else "numpy"
