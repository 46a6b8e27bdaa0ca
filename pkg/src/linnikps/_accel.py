"""Backend selection for the hot loops.

Set ``LINNIKPS_DISABLE_NUMBA=1`` to force the pure-numpy fallbacks; the
numba path is used whenever numba imports cleanly and the flag is unset.
"""

import os

try:
    import numba
except ImportError:  # pragma: no cover - exercised only without numba
    numba = None

_FLAG = os.environ.get("LINNIKPS_DISABLE_NUMBA", "").strip().lower()

HAVE_NUMBA = numba is not None
USE_NUMBA = HAVE_NUMBA and _FLAG not in ("1", "true", "yes", "on")


def njit(fn):
    """Compile ``fn`` in nopython mode if numba is available.

    The undecorated function is returned when numba is missing, so the
    numba source still runs (slowly) as plain Python.
    """
    if not HAVE_NUMBA:
        return fn
    return numba.njit(cache=True, nogil=True)(fn)


def backend_name():
    return "numba" if USE_NUMBA else "numpy"
