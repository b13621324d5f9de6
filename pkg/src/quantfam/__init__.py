"""Quantile-defined distribution families built from Tukey-type transforms.

The g-and-h family and its relatives are defined through their quantile
function ``Q(u) = a + b * r0(Q_W(u))``.  This package evaluates them,
computes closed-form and numerical (L-)moments, fits them by several
estimators and runs seeded simulation studies comparing those estimators.
"""
from ._accel import USE_NUMBA
from .distributions import (
    cdf, central_moments_and_shape, inverse_quantile, log_likelihood, logpdf, median, mode,
    moment_numeric, pdf, quantile, raw_moment_gh, sample, support, tail_index,
)
from .errors import QuantFamError
from .estimators import FitResult, Method, fit, fit_logistic_lmatch, fit_ml, fit_mom, fit_molm, fit_qm
from .families import FamilyKind, FamilySpec, is_monotone, transform, validate
from .lmoments import LMomentSet, population_lmoments, sample_lmoments
from .reporting import GofReport, qq_points, rmse

__version__ = "0.1.0"

__all__ = [
    "USE_NUMBA", "FamilyKind", "FamilySpec", "validate", "transform", "is_monotone",
    "quantile", "cdf", "pdf", "logpdf", "support", "inverse_quantile", "log_likelihood",
    "sample", "mode", "median", "raw_moment_gh", "central_moments_and_shape",
    "moment_numeric", "tail_index", "LMomentSet", "sample_lmoments", "population_lmoments",
    "FitResult", "Method", "fit", "fit_molm", "fit_mom", "fit_ml", "fit_qm",
    "fit_logistic_lmatch", "GofReport", "rmse", "qq_points", "QuantFamError", "__version__",
]
