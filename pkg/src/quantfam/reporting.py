"""Quantile goodness-of-fit: RMSE, Q-Q points and per-group fit reports."""
from __future__ import annotations

import csv
import io
import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Any, Hashable, Iterable, Sequence

import numpy as np

from .distributions import quantile
from .errors import QuantFamError, TooFewObservations
from .estimators import FitResult, Method, fit
from .families import FamilyKind, FamilySpec


def mid_levels(n: int) -> np.ndarray:
    """Plotting positions ``(i - 0.5) / n`` for ``i = 1..n``."""
    return (np.arange(1, n + 1) - 0.5) / n


def rmse(data, spec: FamilySpec) -> float:
    """Root mean squared gap between model quantiles and order statistics.

    The i-th order statistic is paired with the model quantile at level
    ``(i - 0.5) / n``; no interpolation is involved.
    """
    x = np.sort(np.asarray(data, dtype=float).ravel())
    if x.size < 2:
        raise TooFewObservations("rmse needs at least 2 observations")
    model = quantile(mid_levels(x.size), spec)
    return float(np.sqrt(np.mean((model - x) ** 2)))


def qq_points(data, spec: FamilySpec, levels: Sequence[float] | None = None) -> list[tuple[float, float]]:
    """``(model quantile, sample quantile)`` pairs sorted by level.

    With the default levels ``(i - 0.5)/n`` the sample side is the sorted
    data.  Custom levels pick the order statistic ``x_(ceil(u n))``.
    """
    x = np.sort(np.asarray(data, dtype=float).ravel())
    if levels is None:
        u = mid_levels(x.size)
        sample_q = x
    else:
        u = np.sort(np.asarray(levels, dtype=float))
        idx = np.clip(np.ceil(u * x.size).astype(int), 1, x.size) - 1
        sample_q = x[idx]
    model = quantile(u, spec)
    return [(float(m), float(s)) for m, s in zip(model, sample_q)]


@dataclass(frozen=True)
class GofReport:
    rmse: float
    n: int
    spec: FamilySpec
    qq: tuple[tuple[float, float], ...]

    @classmethod
    def build(cls, data, spec: FamilySpec) -> "GofReport":
        x = np.asarray(data, dtype=float).ravel()
        return cls(rmse(x, spec), int(x.size), spec, tuple(qq_points(x, spec)))

    def to_dict(self) -> dict[str, Any]:
        return {"rmse": self.rmse, "n": self.n, "spec": self.spec.to_dict(),
                "qq": [list(p) for p in self.qq]}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"

    def qq_csv(self) -> str:
        return qq_csv(self.qq)


def qq_csv(points: Iterable[tuple[float, float]]) -> str:
    """Two-column CSV ``model_q,sample_q`` with 17 significant digits."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(("model_q", "sample_q"))
    for m, s in points:
        w.writerow((format(m, ".17g"), format(s, ".17g")))
    return buf.getvalue()


@dataclass(frozen=True)
class GroupFit:
    key: Hashable
    n: int
    fit: FitResult | None
    rmse: float | None
    error: str | None = None

    def to_dict(self) -> dict[str, Any]:
        return {"key": self.key, "n": self.n, "rmse": self.rmse, "error": self.error,
                "fit": None if self.fit is None else self.fit.to_dict()}


def _fit_group(args) -> GroupFit:
    key, x, family, method = args
    try:
        res = fit(x, family, method)
    except QuantFamError as exc:
        return GroupFit(key, int(x.size), None, None, f"{type(exc).__name__}: {exc}")
    return GroupFit(key, int(x.size), res, rmse(x, res.spec))


def group_report(values, keys, family: FamilyKind | str = FamilyKind.GH,
                 method: Method | str = Method.MoLM, parallelism: int = 1) -> list[GroupFit]:
    """Fit one model per distinct key and score each group by RMSE.

    Groups are returned in sorted key order whatever the worker count, so
    sliced analyses (per month, per line of business) are reproducible.
    Groups too small for the method carry an ``error`` instead of a fit.
    """
    values = np.asarray(values, dtype=float).ravel()
    keys = list(keys)
    if len(keys) != values.size:
        raise ValueError("values and keys must have the same length")
    groups: dict[Hashable, list[float]] = {}
    for k, v in zip(keys, values):
        groups.setdefault(k, []).append(v)
    tasks = [(k, np.array(groups[k]), family, method) for k in sorted(groups)]
    if parallelism == 1:
        return [_fit_group(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=parallelism) as pool:
        return list(pool.map(_fit_group, tasks))
