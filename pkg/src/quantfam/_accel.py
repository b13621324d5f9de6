"""Optional numba acceleration.

The hot kernels live in :mod:`quantfam.kernels` in two flavours: numba
``@njit`` loops and vectorized numpy.  Numba is used when importable unless
the environment variable ``QUANTFAM_NUMBA`` is set to ``0``/``false``/``off``.
The flag is read once, at import time.
"""
import os

try:
    import numba  # noqa: F401
    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    HAVE_NUMBA = False


def _flag_enabled() -> bool:
    value = os.environ.get("QUANTFAM_NUMBA", "1").strip().lower()
    return value not in ("0", "false", "no", "off")


USE_NUMBA = HAVE_NUMBA and _flag_enabled()
