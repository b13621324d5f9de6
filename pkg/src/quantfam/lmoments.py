"""Sample and population L-moments.

Population L-moments of every family are computed by adaptive quadrature
on the base-variable axis.  The two logistic-base families also have
closed forms in harmonic numbers and polygamma functions, implemented here
with their own series evaluators.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from . import kernels
from .errors import (
    ConstraintViolation, DegenerateSample, MomentDoesNotExist, PoleInput, TooFewObservations,
)
from .families import FamilySpec

log = logging.getLogger(__name__)

EULER_GAMMA = 0.57721566490153286061

# B_2, B_4, ..., B_20
_BERNOULLI = (1 / 6, -1 / 30, 1 / 42, -1 / 30, 5 / 66, -691 / 2730, 7 / 6,
              -3617 / 510, 43867 / 798, -174611 / 330)
_SERIES_TERMS = 40


class PWMSet(NamedTuple):
    """Sample probability-weighted moments ``M0..M3``."""

    M0: float
    M1: float
    M2: float
    M3: float


@dataclass(frozen=True)
class LMomentSet:
    """First four L-moments and the ratios ``tau3 = l3/l2``, ``tau4 = l4/l2``.

    The ratios are ``None`` when ``l2 = 0``.
    """

    l1: float
    l2: float
    l3: float
    l4: float
    tau3: float | None
    tau4: float | None

    @classmethod
    def from_lmoments(cls, l1, l2, l3, l4) -> "LMomentSet":
        l1, l2, l3, l4 = float(l1), float(l2), float(l3), float(l4)
        if l2 == 0:
            return cls(l1, l2, l3, l4, None, None)
        return cls(l1, l2, l3, l4, l3 / l2, l4 / l2)

    def to_dict(self) -> dict:
        return {"l1": self.l1, "l2": self.l2, "l3": self.l3, "l4": self.l4,
                "tau3": self.tau3, "tau4": self.tau4}

    @property
    def ratios_defined(self) -> bool:
        return self.tau3 is not None


def tau4_lower_bound(tau3: float) -> float:
    """Smallest attainable L-kurtosis for a given L-skewness."""
    return 0.25 * (5.0 * tau3 * tau3 - 1.0)


# -- sample L-moments ---------------------------------------------------

def _sorted_sample(data) -> np.ndarray:
    x = np.sort(np.asarray(data, dtype=float).ravel())
    if x.size < 4:
        raise TooFewObservations(f"need at least 4 observations, got {x.size}")
    if not np.all(np.isfinite(x)):
        raise ValueError("sample contains non-finite values")
    return x


def sample_pwm(data) -> PWMSet:
    """Unbiased sample probability-weighted moments.

    ``M_k = (1/n) sum_i [(i-1)...(i-k)] / [(n-1)...(n-k)] x_(i)``.
    Data need not be sorted.
    """
    x = _sorted_sample(data)
    n = x.size
    i = np.arange(1, n + 1, dtype=float)
    w1 = (i - 1) / (n - 1)
    w2 = w1 * (i - 2) / (n - 2)
    w3 = w2 * (i - 3) / (n - 3)
    return PWMSet(float(np.mean(x)), float(np.dot(w1, x) / n),
                  float(np.dot(w2, x) / n), float(np.dot(w3, x) / n))


def sample_lmoments(data, require_ratios: bool = False) -> LMomentSet:
    """First four sample L-moments from probability-weighted moments.

    Parameters
    ----------
    data : array_like
        At least four observations, any order.
    require_ratios : bool
        Raise :class:`~quantfam.errors.DegenerateSample` if ``l2 = 0``
        instead of returning undefined ratios.
    """
    m0, m1, m2, m3 = sample_pwm(data)
    l1 = m0
    l2 = 2 * m1 - m0
    l3 = 6 * m2 - 6 * m1 + m0
    l4 = 20 * m3 - 30 * m2 + 12 * m1 - m0
    # rounding can leave a tiny nonzero l2 for constant data
    x = np.asarray(data, dtype=float)
    if np.ptp(x) == 0:
        l2 = l3 = l4 = 0.0
    out = LMomentSet.from_lmoments(l1, l2, l3, l4)
    if require_ratios and not out.ratios_defined:
        raise DegenerateSample("sample has zero L-scale; L-moment ratios are undefined")
    return out


def sample_lmoments_direct(data) -> LMomentSet:
    """Sample L-moments straight from the order-statistic definition.

    ``l_r = C(n, r)^-1 / r * sum_i x_(i) sum_k (-1)^k C(r-1, k) C(i-1, r-1-k) C(n-i, k)``.
    Much slower than :func:`sample_lmoments`; kept as an independent check.
    """
    x = _sorted_sample(data)
    n = x.size
    out = []
    for r in range(1, 5):
        weights = np.zeros(n)
        for i in range(1, n + 1):
            weights[i - 1] = sum((-1) ** k * math.comb(r - 1, k) * math.comb(i - 1, r - 1 - k)
                                 * math.comb(n - i, k) for k in range(r))
        out.append(math.fsum(weights * x) / (r * math.comb(n, r)))
    return LMomentSet.from_lmoments(*out)


def shifted_legendre(k: int, u):
    """Shifted Legendre polynomial ``P*_k(u)`` on [0, 1], k = 0..3."""
    u = np.asarray(u, dtype=float)
    if k == 0:
        out = np.ones_like(u)
    elif k == 1:
        out = 2 * u - 1
    elif k == 2:
        out = (6 * u - 6) * u + 1
    elif k == 3:
        out = ((20 * u - 30) * u + 12) * u - 1
    else:
        raise ValueError("k must be 0, 1, 2 or 3")
    return float(out) if out.ndim == 0 else out


# -- population L-moments ---------------------------------------------------

def population_lmoments(spec: FamilySpec, atol: float = 1e-12, rtol: float = 1e-12) -> LMomentSet:
    """Population L-moments ``l_k = int_0^1 Q(u) P*_{k-1}(u) du``.

    The integral is taken over the base variable ``w`` (``u = F_W(w)``),
    where the integrand ``r0(w) P*(F_W(w)) f_W(w)`` is smooth and decays.

    Raises
    ------
    MomentDoesNotExist
        If the integrand does not decay (infinite mean).
    """
    code, p = spec.kernel()
    lam, converged = kernels.lmoment_integrals(code, p, atol, rtol)
    if not np.all(np.isfinite(lam)):
        raise MomentDoesNotExist(f"population L-moments do not exist for {spec.to_dict()}")
    if not converged:
        log.warning("L-moment quadrature hit its subdivision limit for %s", spec.to_dict())
    b = spec.b
    return LMomentSet.from_lmoments(spec.a + b * lam[0], b * lam[1], b * lam[2], b * lam[3])


# -- special functions ------------------------------------------------------

def _euler_maclaurin_tail(n: float, derivs) -> float:
    """Correction ``-sum_j B_2j/(2j)! f^(2j-1)(n)`` given a derivative callback."""
    total = 0.0
    for j, b2j in enumerate(_BERNOULLI, start=1):
        total -= b2j / math.factorial(2 * j) * derivs(2 * j - 1)
    return total


def _is_nonpositive_integer(x: float) -> bool:
    return x <= 0 and x == math.floor(x)


def harmonic_number(x: float) -> float:
    """Harmonic number ``H[x] = sum_k x / (k (x + k))``, any real ``x`` that is not a negative integer.

    The series is summed for 40 terms and the remainder is closed with an
    Euler-Maclaurin correction, giving about 1e-15 absolute accuracy.

    >>> round(harmonic_number(3), 12)
    1.833333333333
    """
    x = float(x)
    if not math.isfinite(x):
        raise ValueError("x must be finite")
    if x < 0 and _is_nonpositive_integer(x):
        raise PoleInput(f"harmonic number has a pole at x={x}")
    if x == 0:
        return 0.0
    n = _SERIES_TERMS + max(0, math.ceil(-x))
    head = math.fsum(1.0 / k - 1.0 / (x + k) for k in range(1, n + 1))
    # remaining terms f(t) = 1/t - 1/(x+t) for t > n
    f_n = 1.0 / n - 1.0 / (x + n)

    def deriv(m):
        return (-1) ** m * math.factorial(m) * (n ** -(m + 1) - (x + n) ** -(m + 1))

    tail = math.log1p(x / n) - 0.5 * f_n + _euler_maclaurin_tail(n, deriv)
    return head + tail


def polygamma(m: int, x: float) -> float:
    """Polygamma ``P[m, x]`` for ``x > 0``; ``m = 0`` is digamma, ``m = 1`` trigamma.

    For ``m >= 1`` this is ``(-1)^(m+1) m! sum_k (x + k)^-(m+1)``.  That
    series diverges for ``m = 0``; digamma is evaluated as
    ``H[x - 1] - gamma_E`` instead.
    """
    m = int(m)
    x = float(x)
    if m < 0:
        raise ValueError("m must be non-negative")
    if not x > 0:
        raise PoleInput(f"polygamma requires x > 0, got {x}")
    if m == 0:
        return harmonic_number(x - 1.0) - EULER_GAMMA
    n = _SERIES_TERMS
    s = m + 1
    head = math.fsum((x + k) ** -s for k in range(n))
    # f(t) = (x + t)^-s summed over t >= n
    f_n = (x + n) ** -s

    def deriv(j):
        rising = math.prod(range(s, s + j))
        return (-1) ** j * rising * (x + n) ** -(s + j)

    tail = (x + n) ** -m / m + 0.5 * f_n + _euler_maclaurin_tail(n, deriv)
    return (-1) ** (m + 1) * math.factorial(m) * (head + tail)


def check_logistic_gk(gamma: float, kappa: float) -> None:
    if not (gamma + kappa < 1 and kappa < 1 and 1 + gamma > kappa):
        raise ConstraintViolation(
            f"need gamma + kappa < 1, kappa < 1, 1 + gamma > kappa; got gamma={gamma}, kappa={kappa}")


def check_logistic_kk(kappa_left: float, kappa_right: float) -> None:
    if not (kappa_left < 1 and kappa_right < 1):
        raise ConstraintViolation(
            f"need kappa_left < 1 and kappa_right < 1; got {kappa_left}, {kappa_right}")


def logistic_gk_lambda(gamma: float, kappa: float) -> tuple[float, float]:
    """First two L-moments of ``((e^(gamma W) - 1)/gamma) e^(kappa |W|)``, W standard logistic.

    At ``gamma = 0`` the transform is ``W e^(kappa |W|)`` and the symmetric
    kappa-kappa result is returned.
    """
    gamma, kappa = float(gamma), float(kappa)
    check_logistic_gk(gamma, kappa)
    if gamma == 0:
        return logistic_kk_lambda(kappa, kappa)
    H = harmonic_number
    h1 = H((-1 - gamma - kappa) / 2)
    h2 = H((-1 + gamma - kappa) / 2)
    h3 = H((gamma - kappa) / 2)
    h4 = H((-1 - kappa) / 2)
    h5 = H(-(gamma + kappa) / 2)
    h6 = H(-kappa / 2)
    lam1 = math.fsum([(-gamma - kappa) * h1, (gamma - kappa) * h2, (kappa - gamma) * h3,
                      2 * kappa * h4, (gamma + kappa) * h5, -2 * kappa * h6]) / (2 * gamma)
    lam2 = math.fsum([2 * gamma, (gamma + kappa) ** 2 * (h5 - h1),
                      -(gamma - kappa) ** 2 * (h3 - h2)]) / (2 * gamma)
    return lam1, lam2


def logistic_kk_lambda(kappa_left: float, kappa_right: float) -> tuple[float, float]:
    """First two L-moments of ``W e^(kappa_side |W|)``, W standard logistic."""
    kl, kr = float(kappa_left), float(kappa_right)
    check_logistic_kk(kl, kr)
    p5, p6 = polygamma(0, 0.5 - kl / 2), polygamma(0, 1 - kl / 2)
    p7, p8 = polygamma(0, 0.5 - kr / 2), polygamma(0, 1 - kr / 2)
    p9, p10 = polygamma(1, 0.5 - kl / 2), polygamma(1, 1 - kl / 2)
    p11, p12 = polygamma(1, 0.5 - kr / 2), polygamma(1, 1 - kr / 2)
    lam1 = 0.25 * math.fsum([2 * p5, -2 * p6, -2 * p7, 2 * p8,
                             -kl * p9, kl * p10, kr * p11, -kr * p12])
    lam2 = 0.25 * math.fsum([2, kl * (-4 * p5 + 4 * p6 + kl * (p9 - p10)),
                             2, kr * (-4 * p7 + 4 * p8 + kr * (p11 - p12))])
    return lam1, lam2
