"""Tukey transform families.

Each family is a map ``x = a + b * r0(w)`` from a base variable ``w``
(standard normal, or standard logistic for the two L-moment variants) to
the observation scale.  :class:`FamilySpec` carries the family tag and its
parameters and is validated on construction.
"""
from __future__ import annotations

import dataclasses
import json
import math
from dataclasses import dataclass
from enum import Enum
from typing import Any, NamedTuple

import numpy as np

from . import kernels
from .errors import InvalidParameter

DEFAULT_C = 0.8


class FamilyKind(str, Enum):
    """Family tags; the value is the JSON ``kind`` string."""

    G = "g"
    H = "h"
    GH = "gh"
    GeneralizedGH = "ggh"
    GK = "gk"
    GJ = "gj"
    DoubleHH = "hh"
    SuperHJK = "hjk"
    LogisticGammaKappa = "lgk"
    LogisticKappaKappa = "lkk"

    @classmethod
    def parse(cls, value: "FamilyKind | str") -> "FamilyKind":
        if isinstance(value, cls):
            return value
        text = str(value).strip()
        for member in cls:
            if text.lower() == member.value or text == member.name:
                return member
        raise InvalidParameter("kind", value, "one of " + ", ".join(m.value for m in cls))


# free shape parameters per family, in estimation order
SHAPE_FIELDS: dict[FamilyKind, tuple[str, ...]] = {
    FamilyKind.G: ("g",),
    FamilyKind.H: ("h",),
    FamilyKind.GH: ("g", "h"),
    FamilyKind.GeneralizedGH: ("g", "h"),
    FamilyKind.GK: ("g", "k"),
    FamilyKind.GJ: ("g",),
    FamilyKind.DoubleHH: ("h_l", "h_r"),
    FamilyKind.SuperHJK: ("alpha_s", "beta_s", "gamma_s"),
    FamilyKind.LogisticGammaKappa: ("gamma_l", "kappa_l"),
    FamilyKind.LogisticKappaKappa: ("kappa_left", "kappa_right"),
}

# position of each shape field inside the kernel parameter vector
KERNEL_SLOTS: dict[FamilyKind, tuple[int, ...]] = {
    kind: ((1,) if kind is FamilyKind.H else tuple(range(len(fields))))
    for kind, fields in SHAPE_FIELDS.items()
}

_USES_C = (FamilyKind.GeneralizedGH, FamilyKind.GK, FamilyKind.GJ)
_SHAPE_ALL = ("g", "h", "k", "h_l", "h_r", "alpha_s", "beta_s", "gamma_s",
              "gamma_l", "kappa_l", "kappa_left", "kappa_right")
LOGISTIC_KINDS = (FamilyKind.LogisticGammaKappa, FamilyKind.LogisticKappaKappa)


@dataclass(frozen=True)
class FamilySpec:
    """A family tag plus its full parameter vector.

    Parameters irrelevant to ``kind`` must be left as ``None``.  ``c`` (the
    generalized-g asymmetry constant) defaults to 0.8 on the families that
    use it; ``theta`` is fixed at 1.

    Examples
    --------
    >>> FamilySpec("gh", g=0.5, h=0.2).to_dict()
    {'kind': 'gh', 'a': 0.0, 'b': 1.0, 'g': 0.5, 'h': 0.2}
    """

    kind: FamilyKind
    a: float = 0.0
    b: float = 1.0
    g: float | None = None
    h: float | None = None
    k: float | None = None
    c: float | None = None
    h_l: float | None = None
    h_r: float | None = None
    alpha_s: float | None = None
    beta_s: float | None = None
    gamma_s: float | None = None
    gamma_l: float | None = None
    kappa_l: float | None = None
    kappa_left: float | None = None
    kappa_right: float | None = None
    theta: float = 1.0
    g_poly: tuple[float, ...] = ()
    h_poly: tuple[float, ...] = ()

    def __post_init__(self):
        kind = FamilyKind.parse(self.kind)
        object.__setattr__(self, "kind", kind)
        object.__setattr__(self, "a", float(self.a))
        object.__setattr__(self, "b", float(self.b))
        object.__setattr__(self, "theta", float(self.theta))
        object.__setattr__(self, "g_poly", tuple(float(v) for v in self.g_poly))
        object.__setattr__(self, "h_poly", tuple(float(v) for v in self.h_poly))
        needed = SHAPE_FIELDS[kind]
        for name in _SHAPE_ALL:
            value = getattr(self, name)
            if name in needed:
                if value is None:
                    raise InvalidParameter(name, None, f"required for kind {kind.value!r}")
                object.__setattr__(self, name, float(value))
            elif value is not None:
                raise InvalidParameter(name, value, f"not a parameter of kind {kind.value!r}")
        if kind in _USES_C:
            object.__setattr__(self, "c", DEFAULT_C if self.c is None else float(self.c))
        elif self.c is not None:
            if float(self.c) != DEFAULT_C:
                raise InvalidParameter("c", self.c, f"not a parameter of kind {kind.value!r}")
            object.__setattr__(self, "c", None)
        if (self.g_poly or self.h_poly) and kind is not FamilyKind.GH:
            raise InvalidParameter("g_poly", self.g_poly, "polynomial terms need kind 'gh'")
        _check(self)

    # -- convenience -------------------------------------------------
    def replace(self, **changes) -> "FamilySpec":
        return dataclasses.replace(self, **changes)

    def unit(self) -> "FamilySpec":
        """Same shape with a=0, b=1."""
        return self.replace(a=0.0, b=1.0)

    @property
    def shape(self) -> tuple[float, ...]:
        return tuple(getattr(self, f) for f in SHAPE_FIELDS[self.kind])

    @property
    def is_logistic(self) -> bool:
        return self.kind in LOGISTIC_KINDS

    def kernel(self) -> tuple[int, np.ndarray]:
        """Kernel code and flat parameter vector for the unit transform."""
        K = FamilyKind
        kind = self.kind
        if kind in (K.G, K.H, K.GH):
            g = self.g if kind is not K.H else 0.0
            h = self.h if kind is not K.G else 0.0
            p = [g, h, len(self.g_poly), len(self.h_poly), *self.g_poly, *self.h_poly]
            return kernels.GH, np.array(p, dtype=float)
        if kind is K.GeneralizedGH:
            return kernels.GGH, np.array([self.g, self.h, self.c])
        if kind is K.GK:
            return kernels.GK, np.array([self.g, self.k, self.c])
        if kind is K.GJ:
            return kernels.GJ, np.array([self.g, self.c])
        if kind is K.DoubleHH:
            return kernels.HH, np.array([self.h_l, self.h_r])
        if kind is K.SuperHJK:
            return kernels.HJK, np.array([self.alpha_s, self.beta_s, self.gamma_s])
        if kind is K.LogisticGammaKappa:
            return kernels.LGK, np.array([self.gamma_l, self.kappa_l])
        return kernels.LKK, np.array([self.kappa_left, self.kappa_right])

    # -- serialization -------------------------------------------------
    def to_dict(self) -> dict[str, Any]:
        out: dict[str, Any] = {"kind": self.kind.value, "a": self.a, "b": self.b}
        for name in SHAPE_FIELDS[self.kind]:
            out[name] = getattr(self, name)
        if self.kind in _USES_C:
            out["c"] = self.c
        if self.g_poly:
            out["g_poly"] = list(self.g_poly)
        if self.h_poly:
            out["h_poly"] = list(self.h_poly)
        return out

    @classmethod
    def from_dict(cls, data: dict[str, Any], kind: "FamilyKind | str | None" = None) -> "FamilySpec":
        data = dict(data)
        if kind is None:
            if "kind" not in data:
                raise InvalidParameter("kind", None, "missing")
            kind = data.pop("kind")
        else:
            data.pop("kind", None)
        allowed = {f.name for f in dataclasses.fields(cls)} - {"kind"}
        unknown = sorted(set(data) - allowed)
        if unknown:
            raise InvalidParameter(unknown[0], data[unknown[0]], "unknown key")
        for name in ("g_poly", "h_poly"):
            if name in data:
                data[name] = tuple(data[name])
        return cls(kind, **data)

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_json(cls, text: str) -> "FamilySpec":
        return cls.from_dict(json.loads(text))


def _require(name, value, ok, bound):
    if not (math.isfinite(value) and ok):
        raise InvalidParameter(name, value, bound)


def _check(spec: FamilySpec) -> None:
    K = FamilyKind
    _require("a", spec.a, True, "finite")
    _require("b", spec.b, spec.b > 0, "b > 0")
    _require("theta", spec.theta, spec.theta == 1.0, "theta = 1 (fixed)")
    kind = spec.kind
    if kind in (K.G, K.GH, K.GeneralizedGH, K.GK, K.GJ):
        _require("g", spec.g, True, "finite")
    if kind in (K.H, K.GH, K.GeneralizedGH):
        _require("h", spec.h, spec.h >= 0, "h >= 0")
    for name in ("g_poly", "h_poly"):
        for v in getattr(spec, name):
            _require(name, v, True, "finite coefficients")
    if kind in _USES_C:
        _require("c", spec.c, 0 <= spec.c < 1, "0 <= c < 1")
    if kind is K.GK:
        _require("k", spec.k, spec.k > -0.5, "k > -0.5")
    if kind is K.DoubleHH:
        _require("h_l", spec.h_l, spec.h_l >= 0, "h_l >= 0")
        _require("h_r", spec.h_r, spec.h_r >= 0, "h_r >= 0")
    if kind is K.SuperHJK:
        _require("alpha_s", spec.alpha_s, spec.alpha_s > 0, "alpha_s > 0")
        _require("beta_s", spec.beta_s, spec.beta_s >= 1, "beta_s >= 1")
        _require("gamma_s", spec.gamma_s, spec.gamma_s > 0, "gamma_s > 0")
    if kind is K.LogisticGammaKappa:
        gam, kap = spec.gamma_l, spec.kappa_l
        _require("gamma_l", gam, True, "finite")
        _require("kappa_l", kap, 0 <= kap < 1, "0 <= kappa < 1")
        _require("gamma_l", gam, gam + kap < 1, "gamma + kappa < 1")
        _require("gamma_l", gam, 1 + gam > kap, "1 + gamma > kappa")
    if kind is K.LogisticKappaKappa:
        _require("kappa_left", spec.kappa_left, 0 <= spec.kappa_left < 1, "0 <= kappa_left < 1")
        _require("kappa_right", spec.kappa_right, 0 <= spec.kappa_right < 1,
                 "0 <= kappa_right < 1")


def validate(spec: FamilySpec) -> FamilySpec:
    """Check every parameter constraint and return ``spec`` unchanged.

    Raises
    ------
    InvalidParameter
        Naming the first violated constraint.
    """
    if not isinstance(spec, FamilySpec):
        raise InvalidParameter("spec", spec, "a FamilySpec")
    _check(spec)
    return spec


def transform(w, spec: FamilySpec):
    """Quantile-scale value ``a + b * r0(w)``."""
    code, p = spec.kernel()
    out = spec.a + spec.b * kernels.r0(code, p, np.asarray(w, dtype=float))
    return float(out) if np.ndim(out) == 0 else out


def transform_derivative(w, spec: FamilySpec):
    """Derivative ``b * r0'(w)``."""
    code, p = spec.kernel()
    out = spec.b * kernels.dr0(code, p, np.asarray(w, dtype=float))
    return float(out) if np.ndim(out) == 0 else out


class MonotonicityCertificate(NamedTuple):
    monotone: bool
    first_violation: float | None


def monotonicity_certificate(spec: FamilySpec, w_lo: float = -8.0, w_hi: float = 8.0,
                             n_grid: int = 4001) -> MonotonicityCertificate:
    """Check ``r0' > 0`` on an evenly spaced grid over ``[w_lo, w_hi]``."""
    if not w_lo < w_hi:
        raise ValueError("need w_lo < w_hi")
    if n_grid < 2:
        raise ValueError("need n_grid >= 2")
    grid = np.linspace(w_lo, w_hi, int(n_grid))
    code, p = spec.kernel()
    with np.errstate(over="ignore", invalid="ignore"):
        d = kernels.dr0(code, p, grid)
    bad = ~(d > 0)
    if bad.any():
        return MonotonicityCertificate(False, float(grid[np.argmax(bad)]))
    return MonotonicityCertificate(True, None)


def is_monotone(spec: FamilySpec, w_lo: float = -8.0, w_hi: float = 8.0,
                n_grid: int = 801) -> bool:
    """Cheap monotonicity check used by the fitting code."""
    code, p = spec.kernel()
    grid = np.linspace(w_lo, w_hi, n_grid)
    d, _ = kernels.min_derivative(code, p, grid)
    return d > 0
