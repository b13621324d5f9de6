"""Kernel dispatch.

The public functions here pick the numba implementation when
:data:`quantfam._accel.USE_NUMBA` is true and the spec has no polynomial
g(w)/h(w) coefficients; otherwise the numpy implementation runs.  Both
implementations share one algorithm, so results agree to rounding.
"""
import numpy as np

from .._accel import USE_NUMBA
from . import _numpy as numpy_impl
from ._common import (
    ABOVE_SUPPORT, BELOW_SUPPORT, GGH, GH, GJ, GK, HH, HJK, LGK, LKK,
    LOGISTIC_CODES, NO_CONVERGENCE, OK,
)

if USE_NUMBA:
    from . import _numba as numba_impl
else:  # pragma: no cover - exercised with QUANTFAM_NUMBA=0
    numba_impl = None

__all__ = [
    "GH", "GGH", "GK", "GJ", "HH", "HJK", "LGK", "LKK", "LOGISTIC_CODES",
    "OK", "BELOW_SUPPORT", "ABOVE_SUPPORT", "NO_CONVERGENCE",
    "r0", "dr0", "log_abs_r0", "log_base_pdf", "base_cdf", "unit_support",
    "invert", "log_likelihood", "lmoment_integrals", "min_derivative",
    "numpy_impl", "numba_impl", "backend",
]


def _use_numba(code, p):
    return numba_impl is not None and not numpy_impl._has_poly(code, p)


def backend(code=GH, p=None):
    """Name of the backend that would serve ``(code, p)``."""
    if p is None:
        p = np.zeros(4)
    return "numba" if _use_numba(code, p) else "numpy"


r0 = numpy_impl.r0
dr0 = numpy_impl.dr0
log_abs_r0 = numpy_impl.log_abs_r0
log_base_pdf = numpy_impl.log_base_pdf
base_cdf = numpy_impl.base_cdf
unit_support = numpy_impl.unit_support


def invert(code, p, z, thr, max_iter=200, expansion=2.0):
    """Solve ``r0(w) = z``; returns ``(w, status)`` arrays."""
    z = np.ascontiguousarray(np.atleast_1d(z), dtype=float)
    thr = np.ascontiguousarray(np.broadcast_to(np.asarray(thr, dtype=float), z.shape))
    if _use_numba(code, p):
        return numba_impl.invert(code, p, z, thr, int(max_iter), float(expansion))
    return numpy_impl.invert(code, p, z, thr, int(max_iter), float(expansion))


def log_likelihood(code, p, x, a, b, thr_abs=1e-12, max_iter=200, expansion=2.0):
    x = np.ascontiguousarray(x, dtype=float)
    if _use_numba(code, p):
        return numba_impl.log_likelihood(code, p, x, float(a), float(b), float(thr_abs),
                                         int(max_iter), float(expansion))
    return numpy_impl.log_likelihood(code, p, x, a, b, thr_abs, int(max_iter), expansion)


def lmoment_integrals(code, p, atol=1e-12, rtol=1e-12):
    """Unit-transform L-moments ``(l1..l4)`` and a convergence flag."""
    if _use_numba(code, p):
        acc, ok = numba_impl.lmoment_integrals(code, p, float(atol), float(rtol))
        return acc, bool(ok)
    return numpy_impl.lmoment_integrals(code, p, atol, rtol)


def min_derivative(code, p, grid):
    """Smallest ``dr0`` on ``grid`` and where it occurs (first occurrence)."""
    grid = np.ascontiguousarray(grid, dtype=float)
    if _use_numba(code, p):
        d, w = numba_impl.min_derivative(code, p, grid)
        return float(d), float(w)
    d = dr0(code, p, grid)
    if np.isnan(d).any():
        i = int(np.argmax(np.isnan(d)))
    else:
        i = int(np.argmin(d))
    return float(d[i]), float(grid[i])
