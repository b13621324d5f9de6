import math

import mpmath as mp
import numpy as np
import pytest
from scipy import integrate, stats

from quantfam.distributions import (
    InversionSettings, cdf, central_moments_and_shape, inverse_quantile, log_likelihood, logpdf,
    median, mode, moment_numeric, pdf, quantile, raw_moment_gh, sample, skewness_functional,
    slow_variation, spread_functional, support, survival, tail_index, uniform_stream,
)
from quantfam.errors import Divergent, MomentDoesNotExist, NotInSupport, UnsupportedFamily
from quantfam.families import FamilyKind, FamilySpec, transform

from conftest import TEST_SPECS

K = FamilyKind
LEVELS = np.arange(1, 100) / 100
GH52 = FamilySpec(K.GH, g=0.5, h=0.2)


def mp_gh_mean(g, h):
    mp.mp.dps = 30
    f = lambda w: (mp.exp(g * w) - 1) / g * mp.exp(h * w * w / 2) * mp.npdf(w)
    return float(mp.quad(f, [-mp.inf, 0, mp.inf]))


# -- quantile ------------------------------------------------------------------

def test_quantile_median_is_a(any_spec):
    assert quantile(0.5, any_spec) == pytest.approx(any_spec.a, abs=1e-14)
    assert median(any_spec) == any_spec.a


def test_quantile_values():
    assert quantile(0.975, FamilySpec(K.GH, g=0.0, h=0.0)) == pytest.approx(1.959963984540054, rel=1e-14)
    z = float(mp.sqrt(2) * mp.erfinv(2 * mp.mpf("0.99") - 1))
    want = (math.exp(0.5 * z) - 1) / 0.5 * math.exp(0.1 * z * z)
    assert quantile(0.99, GH52) == pytest.approx(want, rel=1e-13)


def test_quantile_rejects_endpoints():
    for u in (0.0, 1.0, -0.1):
        with pytest.raises(ValueError):
            quantile(u, GH52)


def test_quantile_strictly_increasing(any_spec):
    assert np.all(np.diff(quantile(LEVELS, any_spec)) > 0)


def test_logistic_base_quantile():
    spec = FamilySpec(K.LogisticKappaKappa, kappa_left=0.0, kappa_right=0.0)
    assert quantile(0.75, spec) == pytest.approx(math.log(3), rel=1e-14)


# -- inversion, cdf, pdf -------------------------------------------------------------

def test_inverse_quantile_identity():
    assert inverse_quantile(1.959964, FamilySpec(K.GH, g=0.0, h=0.0)) == pytest.approx(1.959964, abs=1e-12)


def test_inverse_round_trip():
    u = np.array([0.01, 0.5, 0.99])
    w = inverse_quantile(quantile(u, GH52), GH52)
    np.testing.assert_allclose(w, stats.norm.ppf(u), atol=1e-10)


def test_not_in_support():
    g1 = FamilySpec(K.G, g=1.0)
    assert support(g1) == (-1.0, math.inf)
    with pytest.raises(NotInSupport):
        inverse_quantile(-1.5, g1)
    assert cdf(-1.5, g1) == 0.0
    assert pdf(-1.5, g1) == 0.0


def test_cdf_round_trip(any_spec):
    np.testing.assert_allclose(cdf(quantile(LEVELS, any_spec), any_spec), LEVELS, atol=1e-9)


def test_cdf_examples():
    assert cdf(0.0, FamilySpec(K.GH, g=0.0, h=0.0)) == pytest.approx(0.5)
    assert cdf(quantile(0.9, GH52), GH52) == pytest.approx(0.9, abs=1e-10)
    assert survival(quantile(0.9, GH52), GH52) == pytest.approx(0.1, abs=1e-10)


def test_pdf_examples():
    assert pdf(0.0, FamilySpec(K.GH, g=0.0, h=0.0)) == pytest.approx(1 / math.sqrt(2 * math.pi), rel=1e-14)
    assert pdf(0.0, FamilySpec(K.H, h=0.3)) == pytest.approx(1 / math.sqrt(2 * math.pi), rel=1e-12)


def test_pdf_normalization(any_spec):
    lo, hi = quantile(np.array([1e-9, 1 - 1e-9]), any_spec)
    pts = quantile(np.array([1e-6, 0.01, 0.1, 0.5, 0.9, 0.99, 1 - 1e-6]), any_spec)
    val, _ = integrate.quad(lambda t: float(pdf(t, any_spec)), lo, hi, points=pts, limit=400,
                            epsabs=1e-11, epsrel=1e-11)
    assert val == pytest.approx(1.0, abs=1e-6)


def test_pdf_quantile_duality(any_spec):
    u = LEVELS[4:-4]
    step = 1e-6
    dq = (quantile(u + step, any_spec) - quantile(u - step, any_spec)) / (2 * step)
    np.testing.assert_allclose(pdf(quantile(u, any_spec), any_spec) * dq, 1.0, atol=1e-5)


def test_logpdf_matches_log_likelihood():
    x = sample(200, 4, GH52).x
    assert log_likelihood(x, GH52) == pytest.approx(float(np.sum(logpdf(x, GH52))), rel=1e-12)


def test_inversion_settings_validate():
    with pytest.raises(ValueError):
        InversionSettings(abs_tol=0.0)
    with pytest.raises(ValueError):
        InversionSettings(max_iter=0)


# -- sampling ------------------------------------------------------------------

def test_sample_reproducible():
    a = sample(5, 7, FamilySpec(K.GH, g=0.0, h=0.0))
    b = sample(5, 7, FamilySpec(K.GH, g=0.0, h=0.0))
    assert a.x.tobytes() == b.x.tobytes()
    assert a.metadata()["seed"] == 7 and a.n == 5


def test_sample_uses_mersenne_twister():
    ref = np.random.Generator(np.random.MT19937(123)).random(10)
    np.testing.assert_array_equal(uniform_stream(10, 123), ref)


def test_sample_rejects_zero():
    with pytest.raises(ValueError):
        sample(0, 1, GH52)


def test_sample_mean_large_n():
    x = sample(10 ** 6, 11, GH52).x
    se = x.std() / math.sqrt(x.size)
    assert abs(x.mean() - raw_moment_gh(1, GH52)) < 3 * se


def test_ks_against_cdf(any_spec):
    x = sample(10 ** 5, 5, any_spec).x
    res = stats.kstest(x, lambda t: cdf(t, any_spec))
    assert res.statistic < 1.63 / math.sqrt(x.size)


# -- moments ------------------------------------------------------------------

def test_raw_moment_first():
    want = (math.exp(0.15625) - 1) / (0.5 * math.sqrt(0.8))
    assert raw_moment_gh(1, GH52) == pytest.approx(want, rel=1e-13)
    assert raw_moment_gh(1, GH52) == pytest.approx(mp_gh_mean(0.5, 0.2), rel=1e-12)
    assert raw_moment_gh(1, FamilySpec(K.H, h=0.2)) == 0.0


def test_raw_moment_existence():
    with pytest.raises(MomentDoesNotExist):
        raw_moment_gh(4, FamilySpec(K.GH, g=0.1, h=0.3))
    with pytest.raises(UnsupportedFamily):
        raw_moment_gh(1, TEST_SPECS["gk"])


@pytest.mark.parametrize("spec", [GH52, FamilySpec(K.GH, a=1, b=2, g=-0.4, h=0.1),
                                  FamilySpec(K.G, g=0.8), FamilySpec(K.H, h=0.15),
                                  FamilySpec(K.GH, g=0.02, h=0.05)])
@pytest.mark.parametrize("k", [1, 2, 3, 4])
def test_raw_vs_numeric(spec, k):
    if spec.kind is not K.G and spec.h >= 1 / k:
        pytest.skip("moment does not exist")
    assert moment_numeric(k, spec) == pytest.approx(raw_moment_gh(k, spec), rel=1e-8, abs=1e-12)


def test_raw_moment_affine_against_mpmath():
    spec = FamilySpec(K.GH, a=1.0, b=2.0, g=0.3, h=0.1)
    mp.mp.dps = 30
    f = lambda w: (1 + 2 * (mp.exp(0.3 * w) - 1) / 0.3 * mp.exp(0.05 * w * w)) ** 3 * mp.npdf(w)
    assert raw_moment_gh(3, spec) == pytest.approx(float(mp.quad(f, [-mp.inf, 0, mp.inf])), rel=1e-11)


def test_moment_numeric_examples():
    assert moment_numeric(2, FamilySpec(K.GH, g=0.0, h=0.0)) == pytest.approx(1.0, rel=1e-12)
    with pytest.raises(Divergent):
        moment_numeric(1, FamilySpec(K.H, h=1.2))


def test_gk_mean_against_mpmath():
    mp.mp.dps = 30
    f = lambda w: (1 + 0.8 * mp.tanh(0.25 * w)) * w * (1 + w * w) ** 0.3 * mp.npdf(w)
    want = float(mp.quad(f, [-mp.inf, 0, mp.inf]))
    assert moment_numeric(1, TEST_SPECS["gk"]) == pytest.approx(want, rel=1e-9)


def test_shape_values():
    gauss = central_moments_and_shape(FamilySpec(K.GH, g=0.0, h=0.0))
    assert gauss.skew == pytest.approx(0.0, abs=1e-14) and gauss.kurt == pytest.approx(3.0, rel=1e-13)
    assert central_moments_and_shape(FamilySpec(K.H, h=0.1)).skew == 0.0
    with pytest.raises(MomentDoesNotExist):
        central_moments_and_shape(FamilySpec(K.GH, g=0.1, h=0.3))


def test_shape_against_monte_carlo():
    spec = FamilySpec(K.GH, g=0.1, h=0.1)
    x = sample(2 * 10 ** 6, 3, spec).x
    sk = stats.skew(x)
    ku = stats.kurtosis(x, fisher=False)
    shape = central_moments_and_shape(spec)
    # generous band: the kurtosis SE is large for h = 0.1 (8th moment is large)
    assert abs(shape.skew - sk) < 0.05
    assert abs(shape.kurt - ku) < 0.3


# -- mode, functionals, tails ------------------------------------------------------

def test_mode():
    # golden section on a flat peak resolves the argmax to about sqrt(machine eps)
    assert mode(FamilySpec(K.GH, g=0.0, h=0.0)) == pytest.approx(0.0, abs=1e-7)
    m = mode(GH52)
    grid = np.linspace(m - 0.5, m + 0.5, 20001)
    assert grid[np.argmax(pdf(grid, GH52))] == pytest.approx(m, abs=1e-4)


def test_functionals():
    gauss = FamilySpec(K.GH, g=0.0, h=0.0)
    assert spread_functional(0.975, gauss) == pytest.approx(2 * 1.959963984540054, rel=1e-13)
    for spec in (gauss, FamilySpec(K.H, h=0.4), FamilySpec(K.GK, g=0.0, k=0.3)):
        assert skewness_functional(0.9, spec) == pytest.approx(0.0, abs=1e-12)
    gam = skewness_functional(0.99, GH52)
    q = quantile(np.array([0.01, 0.5, 0.99]), GH52)
    assert gam == pytest.approx((q[0] + q[2] - 2 * q[1]) / (q[2] - q[0]), rel=1e-13)
    assert abs(gam) <= 1
    with pytest.raises(ValueError):
        spread_functional(0.3, GH52)


def test_tail_index():
    assert tail_index(GH52) == pytest.approx(5.0)
    assert tail_index(FamilySpec(K.GH, g=0.5, h=0.0)) is None
    assert tail_index(FamilySpec(K.G, g=0.5)) is None
    with pytest.raises(UnsupportedFamily):
        tail_index(TEST_SPECS["gk"])


def test_slow_variation_matches_survival():
    # 1 - F(x) = x^(-1/h) L(x) (1 + O(1/log x)) in the right tail
    errs = []
    for w in (10.0, 20.0, 30.0):
        x = float(transform(w, GH52))
        errs.append(abs(float(survival(x, GH52)) * x ** 5 / slow_variation(x, GH52) - 1))
    assert max(errs) < 0.01
    assert errs[2] < errs[0]
