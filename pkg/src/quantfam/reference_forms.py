"""Published closed-form L-moment expressions kept as a regression record.

These expressions integrate the transform against ``sqrt(2) phi(sqrt(2) R)``,
the density of a normal variable with variance 1/2, instead of the standard
normal base.  The resulting values are therefore *not* the L-moments of the
families as defined in :mod:`quantfam.families` and must not be used for
estimation; :func:`quantfam.lmoments.population_lmoments` is the canonical
computation.  :func:`half_variance_l1` evaluates the variance-1/2 integral
numerically so the discrepancy can be checked mechanically.
"""
import math

from scipy import integrate


def g_l1(g: float) -> float:
    """Printed first L-moment of the g family: ``(e^(g^2/2) - 1) / g``.

    This one coincides with the true mean, although the kernel it is
    derived from yields ``(e^(g^2/4) - 1) / g``.
    """
    return math.expm1(g * g / 2) / g


def gh_l1(g: float, h: float) -> float:
    """Printed first L-moment of g-and-h, valid for ``h < 2``."""
    if not h < 2:
        raise ValueError("requires h < 2")
    return (math.exp(g * g / (4 - 2 * h)) * math.sqrt(2) / (g * math.sqrt(2 - h))
            - 2 / (g * math.sqrt(4 - 2 * h)))


def h_l2(h: float) -> float:
    """Printed second L-moment of the h family."""
    q = 1.0 - h
    return 1 / math.sqrt(math.pi) / q * (1 + 1 / math.sqrt(1 + 2 * q))


def half_variance_l1(g: float, h: float) -> float:
    """``sqrt(2) int r0(R) phi(sqrt(2) R) dR`` for g-and-h, by quadrature."""
    q = 0.5 * h - 1.0

    def integrand(r):
        if g == 0:
            return r * math.exp(q * r * r) / math.sqrt(math.pi)
        # exponents combined so the far tails underflow instead of overflowing
        return (math.exp(g * r + q * r * r) - math.exp(q * r * r)) / (g * math.sqrt(math.pi))

    val, _ = integrate.quad(integrand, -math.inf, math.inf, epsabs=1e-14, epsrel=1e-13)
    return val
