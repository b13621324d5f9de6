"""Bounded derivative-free minimization.

Nelder-Mead (scipy) runs on logit-transformed coordinates so every iterate
stays strictly inside the box.  A few randomized restarts from the best
point guard against premature collapse of the simplex.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, NamedTuple

import numpy as np
from scipy.optimize import minimize
from scipy.special import expit, logit

from .errors import NonFiniteObjective

# objective values that are not finite are replaced by this inside the search
PENALTY = 1e100
_EDGE = 1e-10
_SIMPLEX_STEP = 0.5
_RESTART_SCALE = 0.3


@dataclass(frozen=True)
class OptimizerSettings:
    """Stopping rules and restart budget for :func:`minimize_bounded`."""

    x_tol: float = 1e-8
    f_tol: float = 1e-10
    max_evals: int = 5000
    restarts: int = 3
    seed: int = 0

    def __post_init__(self):
        if not (self.x_tol > 0 and self.f_tol > 0):
            raise ValueError("tolerances must be positive")
        if self.max_evals < 1 or self.restarts < 0:
            raise ValueError("max_evals must be >= 1 and restarts >= 0")


class BoundedResult(NamedTuple):
    x: np.ndarray
    fun: float
    n_evals: int
    converged: bool


class _Box:
    def __init__(self, lo, hi):
        self.lo = np.asarray(lo, dtype=float)
        self.width = np.asarray(hi, dtype=float) - self.lo

    def to_unbounded(self, x):
        frac = np.clip((np.asarray(x, dtype=float) - self.lo) / self.width, _EDGE, 1 - _EDGE)
        return logit(frac)

    def to_box(self, y):
        return self.lo + self.width * expit(y)


def minimize_bounded(f: Callable[[np.ndarray], float], x0, lo, hi,
                     settings: OptimizerSettings | None = None) -> BoundedResult:
    """Minimize ``f`` over the box ``[lo, hi]``.

    Parameters
    ----------
    f : callable
        Objective taking a 1-d array.  Non-finite values inside the search
        are treated as a large penalty.
    x0 : array_like
        Start point; clamped into the box.
    lo, hi : array_like
        Finite bounds with ``lo < hi``.
    settings : OptimizerSettings, optional

    Returns
    -------
    BoundedResult
        Best point found (the clamped start point is itself a candidate),
        its value, the total number of evaluations and whether the run
        that produced it met the tolerances.

    Raises
    ------
    NonFiniteObjective
        If ``f`` is not finite at the clamped start point.
    """
    settings = settings or OptimizerSettings()
    lo = np.atleast_1d(np.asarray(lo, dtype=float))
    hi = np.atleast_1d(np.asarray(hi, dtype=float))
    if lo.shape != hi.shape or not np.all(lo < hi) or not np.all(np.isfinite(lo) & np.isfinite(hi)):
        raise ValueError("bounds must be finite with lo < hi")
    box = _Box(lo, hi)
    x0 = np.clip(np.atleast_1d(np.asarray(x0, dtype=float)), lo, hi)
    y0 = box.to_unbounded(x0)
    x0 = box.to_box(y0)

    n_evals = 0

    def wrapped(y):
        nonlocal n_evals
        n_evals += 1
        val = f(box.to_box(y))
        return float(val) if math.isfinite(val) else PENALTY

    f0 = f(x0)
    n_evals += 1
    if not math.isfinite(f0):
        raise NonFiniteObjective(f"objective is {f0} at the start point {x0.tolist()}")

    best_y, best_f, best_ok = y0, float(f0), False
    rng = np.random.default_rng(settings.seed)
    dim = y0.size
    start = y0
    for run in range(settings.restarts + 1):
        simplex = np.vstack([start, start + _SIMPLEX_STEP * np.eye(dim)])
        res = minimize(wrapped, start, method="Nelder-Mead",
                       options={"xatol": settings.x_tol, "fatol": settings.f_tol,
                                "maxfev": settings.max_evals, "initial_simplex": simplex})
        if res.fun < best_f or (run == 0 and res.fun <= best_f):
            best_y, best_f, best_ok = res.x, float(res.fun), bool(res.success)
        elif res.fun <= best_f + settings.f_tol:
            # a restart landing on the same optimum confirms it
            best_ok = best_ok or bool(res.success)
        start = best_y + rng.normal(scale=_RESTART_SCALE, size=dim)
    return BoundedResult(box.to_box(best_y), best_f, n_evals, best_ok)
