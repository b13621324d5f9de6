"""Distribution functions derived from a :class:`~quantfam.families.FamilySpec`.

Only the quantile function is available in closed form; the CDF and density
come from numerically inverting the transform.
"""
from __future__ import annotations

import functools
import math
from dataclasses import dataclass
from typing import Any, NamedTuple

import numpy as np
from scipy import integrate
from scipy.special import logit, ndtri

from . import kernels
from .errors import Divergent, MomentDoesNotExist, NoConvergence, NotInSupport, UnsupportedFamily
from .families import FamilyKind, FamilySpec

_GH_KINDS = (FamilyKind.G, FamilyKind.H, FamilyKind.GH)


@dataclass(frozen=True)
class InversionSettings:
    """Stopping rules for the quantile inversion."""

    abs_tol: float = 1e-12
    max_iter: int = 200
    bracket_expansion: float = 2.0

    def __post_init__(self):
        if not self.abs_tol > 0:
            raise ValueError("abs_tol must be positive")
        if self.max_iter < 1:
            raise ValueError("max_iter must be at least 1")
        if not self.bracket_expansion > 1:
            raise ValueError("bracket_expansion must exceed 1")


DEFAULT_INVERSION = InversionSettings()


def _scalar_or_array(out, like):
    return float(np.asarray(out).reshape(-1)[0]) if np.ndim(like) == 0 else out


def base_quantile(u, spec: FamilySpec):
    """Quantile of the base variable: normal or logistic."""
    u = np.asarray(u, dtype=float)
    if spec.is_logistic:
        return logit(u)
    return ndtri(u)


def quantile(u, spec: FamilySpec):
    """``Q(u) = a + b * r0(Q_W(u))`` for ``u`` strictly inside (0, 1)."""
    arr = np.asarray(u, dtype=float)
    if not np.all((arr > 0) & (arr < 1)):
        raise ValueError("quantile levels must lie strictly inside (0, 1)")
    code, p = spec.kernel()
    with np.errstate(over="ignore"):
        out = spec.a + spec.b * kernels.r0(code, p, base_quantile(arr, spec))
    return _scalar_or_array(out, u)


def support(spec: FamilySpec) -> tuple[float, float]:
    """Closed range of attainable values (endpoints may be infinite)."""
    code, p = spec.kernel()
    lo, hi = kernels.unit_support(code, p)
    return spec.a + spec.b * lo, spec.a + spec.b * hi


def _invert(x, spec, settings):
    x = np.atleast_1d(np.asarray(x, dtype=float))
    code, p = spec.kernel()
    z = (x - spec.a) / spec.b
    thr = settings.abs_tol * np.maximum(1.0, np.abs(x)) / spec.b
    return kernels.invert(code, p, z, thr, settings.max_iter, settings.bracket_expansion)


def inverse_quantile(x, spec: FamilySpec, settings: InversionSettings = DEFAULT_INVERSION):
    """Base-scale value ``w`` with ``transform(w) = x``.

    Raises
    ------
    NotInSupport
        If any ``x`` lies outside the range of the transform.
    NoConvergence
        If the root search runs out of iterations.
    """
    w, status = _invert(x, spec, settings)
    outside = (status == kernels.BELOW_SUPPORT) | (status == kernels.ABOVE_SUPPORT)
    if outside.any():
        bad = np.atleast_1d(x)[np.argmax(outside)]
        raise NotInSupport(f"x={bad!r} is outside the support {support(spec)}")
    if (status == kernels.NO_CONVERGENCE).any():
        raise NoConvergence("quantile inversion did not converge", settings.max_iter)
    return _scalar_or_array(w, x)


def cdf(x, spec: FamilySpec, settings: InversionSettings = DEFAULT_INVERSION):
    """``F(x) = F_W(w*)``; 0 below and 1 above the support."""
    w, status = _invert(x, spec, settings)
    if (status == kernels.NO_CONVERGENCE).any():
        raise NoConvergence("quantile inversion did not converge", settings.max_iter)
    code, _ = spec.kernel()
    out = kernels.base_cdf(code, w)
    out = np.where(status == kernels.BELOW_SUPPORT, 0.0, out)
    out = np.where(status == kernels.ABOVE_SUPPORT, 1.0, out)
    return _scalar_or_array(out, x)


def logpdf(x, spec: FamilySpec, settings: InversionSettings = DEFAULT_INVERSION):
    """Log density; ``-inf`` outside the support."""
    w, status = _invert(x, spec, settings)
    if (status == kernels.NO_CONVERGENCE).any():
        raise NoConvergence("quantile inversion did not converge", settings.max_iter)
    code, p = spec.kernel()
    with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
        out = kernels.log_base_pdf(code, w) - math.log(spec.b) - np.log(kernels.dr0(code, p, w))
    out = np.where(status == kernels.OK, out, -np.inf)
    return _scalar_or_array(out, x)


def pdf(x, spec: FamilySpec, settings: InversionSettings = DEFAULT_INVERSION):
    """Density ``f_W(w*) / (b r0'(w*))``; zero outside the support."""
    out = np.exp(logpdf(x, spec, settings))
    return _scalar_or_array(out, x)


def log_likelihood(data, spec: FamilySpec, settings: InversionSettings = DEFAULT_INVERSION) -> float:
    """Sum of log densities; ``-inf`` as soon as one point is unsupported."""
    code, p = spec.kernel()
    return kernels.log_likelihood(code, p, np.asarray(data, dtype=float), spec.a, spec.b,
                                  settings.abs_tol, settings.max_iter, settings.bracket_expansion)


# -- sampling ---------------------------------------------------------------

@dataclass(frozen=True)
class SamplePayload:
    """Observations plus where they came from."""

    x: np.ndarray
    seed: int | None = None
    spec: FamilySpec | None = None
    source: str | None = None
    column: str | None = None

    @property
    def n(self) -> int:
        return int(self.x.shape[0])

    def metadata(self) -> dict[str, Any]:
        meta: dict[str, Any] = {"seed": self.seed, "n": self.n,
                                "spec": None if self.spec is None else self.spec.to_dict()}
        if self.source is not None:
            meta["source"] = self.source
        if self.column is not None:
            meta["column"] = self.column
        return meta


def uniform_stream(n: int, seed: int) -> np.ndarray:
    """``n`` uniforms in (0, 1) from a seeded Mersenne Twister."""
    rng = np.random.Generator(np.random.MT19937(int(seed)))
    u = rng.random(int(n))
    # random() draws from [0, 1); nudge an exact zero inside the open interval
    u[u == 0.0] = np.nextafter(0.0, 1.0)
    return u


def sample(n: int, seed: int, spec: FamilySpec) -> SamplePayload:
    """Draw ``n`` values by inverse transform, reproducibly for a given seed."""
    if int(n) < 1:
        raise ValueError("n must be at least 1")
    if int(seed) < 0:
        raise ValueError("seed must be non-negative")
    x = np.asarray(quantile(uniform_stream(n, seed), spec), dtype=float)
    return SamplePayload(x=x, seed=int(seed), spec=spec)


# -- moments ------------------------------------------------------------------

@functools.lru_cache(maxsize=None)
def _stirling2_row(k: int, n_max: int) -> list[int]:
    """S(n, k) for n = 0..n_max, exact integers."""
    # S(n, j) = j S(n-1, j) + S(n-1, j-1)
    row = [1] + [0] * k
    out = [row[k]]
    for _ in range(1, n_max + 1):
        new = [0] * (k + 1)
        for j in range(1, k + 1):
            new[j] = j * row[j] + row[j - 1]
        row = new
        out.append(row[k])
    return out


def _gh_unit_raw(k: int, g: float, h: float) -> float:
    """E[r0(W)^k] for the g-and-h transform, closed form."""
    if k == 0:
        return 1.0
    s = 1.0 - k * h
    if abs(g) < 1e-10:
        if k % 2:
            return 0.0
        return math.prod(range(k - 1, 0, -2)) * s ** (-(k + 1) / 2)
    if abs(g) < 0.05:
        # power series in g avoids the cancellation in the alternating sum
        n_max = 2 * 200
        stir = _stirling2_row(k, n_max)
        kfact = math.factorial(k)
        terms = []
        for m in range((k + 1) // 2, n_max // 2 + 1):
            t = (kfact * stir[2 * m]) * g ** (2 * m - k) / (2.0 * s) ** m / math.factorial(m)
            terms.append(t)
            if abs(t) < 1e-18 * abs(math.fsum(terms)):
                break
        return math.fsum(terms) / math.sqrt(s)
    terms = [(-1) ** r * math.comb(k, r) * math.expm1((k - r) ** 2 * g * g / (2.0 * s))
             for r in range(k + 1)]
    return math.fsum(terms) / (math.sqrt(s) * g ** k)


def _gh_shape(spec: FamilySpec) -> tuple[float, float]:
    if spec.kind not in _GH_KINDS or spec.g_poly or spec.h_poly:
        raise UnsupportedFamily(f"closed-form moments need a g, h or g-and-h spec, got {spec.kind.value}")
    g = 0.0 if spec.kind is FamilyKind.H else spec.g
    h = 0.0 if spec.kind is FamilyKind.G else spec.h
    return g, h


def _affine_moment(k: int, a: float, b: float, unit: list[float]) -> float:
    terms = [math.comb(k, j) * a ** (k - j) * b ** j * unit[j] for j in range(k + 1)]
    return math.fsum(terms)


def raw_moment_gh(k: int, spec: FamilySpec) -> float:
    """``E[X^k]`` for the g, h and g-and-h families, 1 <= k <= 8.

    Raises
    ------
    MomentDoesNotExist
        When ``h >= 1/k``.
    """
    if not 1 <= int(k) <= 8:
        raise ValueError("k must be between 1 and 8")
    k = int(k)
    g, h = _gh_shape(spec)
    if h * k >= 1:
        raise MomentDoesNotExist(f"moment {k} requires h < 1/{k}, got h={h}")
    unit = [_gh_unit_raw(j, g, h) for j in range(k + 1)]
    return _affine_moment(k, spec.a, spec.b, unit)


class MomentShape(NamedTuple):
    m1: float
    m2: float
    m3: float
    m4: float
    skew: float
    kurt: float


def central_moments_and_shape(spec: FamilySpec) -> MomentShape:
    """Mean, central moments 2-4, skewness and kurtosis (closed form)."""
    g, h = _gh_shape(spec)
    if 4 * h >= 1:
        raise MomentDoesNotExist(f"kurtosis requires h < 1/4, got h={h}")
    e = [_gh_unit_raw(j, g, h) for j in range(5)]
    mu = e[1]
    # central moments of the unit transform, then rescale by b
    c2 = math.fsum([e[2], -mu * mu])
    c3 = math.fsum([e[3], -3 * mu * e[2], 2 * mu ** 3])
    c4 = math.fsum([e[4], -4 * mu * e[3], 6 * mu * mu * e[2], -3 * mu ** 4])
    if g == 0.0 or abs(g) < 1e-10:
        c3 = 0.0
    b = spec.b
    return MomentShape(spec.a + b * mu, b * b * c2, b ** 3 * c3, b ** 4 * c4,
                       c3 / c2 ** 1.5, c4 / (c2 * c2))


def _tail_extent(code, p, k, start=10.0):
    """Distance beyond which |r0|^k f_W is below e^-40 on both sides."""
    out = []
    for side in (-1.0, 1.0):
        ell = start
        while True:
            w = np.array([side * ell])
            with np.errstate(divide="ignore", over="ignore"):
                val = k * kernels.log_abs_r0(code, p, w)[0] + kernels.log_base_pdf(code, w)[0]
            if val < -40.0:
                break
            ell *= 1.5
            if ell > 1e4:
                raise Divergent(f"moment {k} integrand does not decay")
        out.append(ell)
    return out


def _unit_moment_numeric(code, p, k: int) -> float:
    if k == 0:
        return 1.0
    left, right = _tail_extent(code, p, k)

    def integrand(w):
        arr = np.array([w])
        with np.errstate(divide="ignore", over="ignore"):
            lv = k * kernels.log_abs_r0(code, p, arr)[0] + kernels.log_base_pdf(code, arr)[0]
        return math.copysign(1.0, w) ** k * math.exp(lv) if lv > -745 else 0.0

    parts = []
    for lo, hi in ((-left, 0.0), (0.0, right)):
        edges = np.linspace(lo, hi, 9)
        for x0, x1 in zip(edges[:-1], edges[1:]):
            val, _ = integrate.quad(integrand, x0, x1, epsabs=0.0, epsrel=1e-13, limit=200)
            parts.append(val)
    return math.fsum(parts)


def moment_numeric(k: int, spec: FamilySpec) -> float:
    """``E[X^k]`` by adaptive quadrature on the base-variable axis.

    Works for every family.  Raises :class:`~quantfam.errors.Divergent` when
    the integrand does not decay in the tails.
    """
    k = int(k)
    if k < 0:
        raise ValueError("k must be non-negative")
    code, p = spec.kernel()
    unit = [_unit_moment_numeric(code, p, j) for j in range(k + 1)]
    return _affine_moment(k, spec.a, spec.b, unit)


# -- location and shape functionals -----------------------------------------

_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0


def _golden_max(f, lo, hi, tol):
    c = hi - _INVPHI * (hi - lo)
    d = lo + _INVPHI * (hi - lo)
    fc, fd = f(c), f(d)
    while hi - lo > tol:
        if fc > fd:
            hi, d, fd = d, c, fc
            c = hi - _INVPHI * (hi - lo)
            fc = f(c)
        else:
            lo, c, fc = c, d, fd
            d = lo + _INVPHI * (hi - lo)
            fd = f(d)
    return 0.5 * (lo + hi)


def mode(spec: FamilySpec, tol: float = 1e-10) -> float:
    """Location of the density maximum.

    Maximizes ``log f_W(w) - log r0'(w)`` over ``w`` by golden-section
    search, starting on [-5, 5] and widening if the optimum sits on an edge.
    """
    code, p = spec.kernel()

    def objective(w):
        arr = np.array([w])
        with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
            val = kernels.log_base_pdf(code, arr)[0] - np.log(kernels.dr0(code, p, arr)[0])
        return val if np.isfinite(val) else -np.inf

    lo, hi = -5.0, 5.0
    for _ in range(8):
        w = _golden_max(objective, lo, hi, tol)
        if w - lo > 1e-6 * (hi - lo) and hi - w > 1e-6 * (hi - lo):
            break
        lo, hi = 2.0 * lo, 2.0 * hi
    return float(spec.a + spec.b * kernels.r0(code, p, np.array([w]))[0])


def median(spec: FamilySpec) -> float:
    """The median: ``r0(0) = 0`` for every family, so it equals ``a``."""
    return spec.a


def _check_alpha(alpha):
    if not 0.5 < alpha < 1:
        raise ValueError("alpha must lie in (0.5, 1)")


def spread_functional(alpha: float, spec: FamilySpec) -> float:
    """``Q(alpha) - Q(1 - alpha)``."""
    _check_alpha(alpha)
    return quantile(alpha, spec) - quantile(1.0 - alpha, spec)


def skewness_functional(alpha: float, spec: FamilySpec) -> float:
    """``(Q(alpha) + Q(1 - alpha) - 2 Q(1/2)) / spread``, bounded by 1 in magnitude."""
    _check_alpha(alpha)
    hi, lo = quantile(alpha, spec), quantile(1.0 - alpha, spec)
    return (hi + lo - 2.0 * median(spec)) / (hi - lo)


def tail_index(spec: FamilySpec) -> float | None:
    """Index ``1/h`` of regular variation of the right tail.

    ``None`` when ``h = 0`` (the g family is subexponential but not
    regularly varying).  Families for which no such result holds, including
    g-and-k and g-and-j, raise :class:`~quantfam.errors.UnsupportedFamily`.
    """
    if spec.kind is FamilyKind.G:
        return None
    if spec.kind not in (FamilyKind.H, FamilyKind.GH, FamilyKind.GeneralizedGH) \
            or spec.g_poly or spec.h_poly:
        raise UnsupportedFamily(f"no regular-variation index for kind {spec.kind.value!r}")
    if spec.h == 0:
        return None
    return 1.0 / spec.h


def slow_variation(x, spec: FamilySpec):
    """Asymptotic slowly varying factor ``L`` in ``1 - F(x) ~ x^(-1/h) L(x)``.

    Defined for g-and-h with ``g > 0`` and ``h > 0``; ``x`` is standardized
    by ``(x - a) / b`` first.  Only meaningful for large ``x``.
    """
    if spec.kind is not FamilyKind.GH or spec.g_poly or spec.h_poly:
        raise UnsupportedFamily("slow variation representation needs a g-and-h spec")
    g, h = spec.g, spec.h
    if not (g > 0 and h > 0):
        raise UnsupportedFamily("slow variation representation needs g > 0 and h > 0")
    z = (np.asarray(x, dtype=float) - spec.a) / spec.b
    if np.any(g * z <= 1):
        raise ValueError("x too small: need g * (x - a) / b > 1")
    root = np.sqrt(g * g + 2.0 * h * np.log(g * z))
    num = np.expm1(g / h * root - g * g / h) ** (1.0 / h)
    out = h / (math.sqrt(2.0 * math.pi) * g ** (1.0 / h)) * num / (root - g)
    return _scalar_or_array(out, x)


def survival(x, spec: FamilySpec, settings: InversionSettings = DEFAULT_INVERSION):
    """``1 - F(x)`` computed without cancellation in the right tail."""
    w, status = _invert(x, spec, settings)
    code, _ = spec.kernel()
    out = kernels.base_cdf(code, -w)
    out = np.where(status == kernels.BELOW_SUPPORT, 1.0, out)
    out = np.where(status == kernels.ABOVE_SUPPORT, 0.0, out)
    return _scalar_or_array(out, x)
