import itertools
import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy import integrate

from quantfam.distributions import raw_moment_gh, sample
from quantfam.errors import ConstraintViolation, DegenerateSample, MomentDoesNotExist, PoleInput, TooFewObservations
from quantfam.families import FamilyKind, FamilySpec
from quantfam.lmoments import (
    EULER_GAMMA, LMomentSet, harmonic_number, logistic_gk_lambda, logistic_kk_lambda, polygamma,
    population_lmoments, sample_lmoments, sample_lmoments_direct, sample_pwm, shifted_legendre,
    tau4_lower_bound,
)

from conftest import TEST_SPECS

K = FamilyKind
POOL = [-2.3, -0.7, 0.0, 0.4, 1.1, 1.9, 3.6, 8.2]


def mp_lmoments_logistic(r0, dps=25):
    """l1, l2 by mpmath quadrature over the logistic base.

    Near the constraint boundary the integrand decays like e^(-0.1 |w|), so
    the axis is cut into doubling pieces out to |w| = 2^15.
    """
    mp.mp.dps = dps
    F = lambda w: 1 / (1 + mp.exp(-w))
    f = lambda w: mp.exp(-abs(w)) / (1 + mp.exp(-abs(w))) ** 2
    pos = [0] + [mp.mpf(2) ** j for j in range(-2, 16)]
    pts = [-t for t in reversed(pos[1:])] + pos
    l1 = mp.quad(lambda w: r0(w) * f(w), pts)
    l2 = mp.quad(lambda w: r0(w) * (2 * F(w) - 1) * f(w), pts)
    return float(l1), float(l2)


# -- sample side -------------------------------------------------------------

def test_pwm_hand_values():
    pwm = sample_pwm([4, 2, 1, 3])
    assert pwm.M0 == 2.5
    assert pwm.M1 == pytest.approx(5 / 3, rel=1e-15)


def test_sample_lmoments_hand_values():
    lm = sample_lmoments([1, 2, 3, 4])
    assert lm.l1 == 2.5
    assert lm.l2 == pytest.approx(5 / 6, rel=1e-15)
    assert sample_lmoments([-2, -1, 1, 2]).l3 == pytest.approx(0.0, abs=1e-15)


def test_constant_sample():
    lm = sample_lmoments([3.0] * 6)
    assert lm.l1 == 3.0 and lm.l2 == 0.0 and not lm.ratios_defined
    with pytest.raises(DegenerateSample):
        sample_lmoments([3.0] * 6, require_ratios=True)


def test_too_few():
    with pytest.raises(TooFewObservations):
        sample_lmoments([1, 2, 3])


def test_exhaustive_subsets_match_definition():
    for size in range(4, 9):
        for sub in itertools.combinations(POOL, size):
            fast = sample_lmoments(sub)
            slow = sample_lmoments_direct(sub)
            for k in ("l1", "l2", "l3", "l4"):
                assert getattr(fast, k) == pytest.approx(getattr(slow, k), abs=1e-12)


def test_direct_estimator_by_brute_force():
    # l2 = half the mean absolute difference over all pairs; an independent check of the comb formula
    x = np.array(POOL[:6])
    pairs = [abs(a - b) for a, b in itertools.combinations(x, 2)]
    assert sample_lmoments_direct(x).l2 == pytest.approx(0.5 * np.mean(pairs), rel=1e-13)


@given(st.lists(st.floats(-1e3, 1e3), min_size=5, max_size=40).filter(lambda v: np.ptp(v) > 1e-3),
       st.floats(-100, 100), st.floats(0.01, 100))
def test_affine_equivariance(data, a, b):
    x = np.array(data)
    lx = sample_lmoments(x)
    ly = sample_lmoments(a + b * x)
    scale = np.max(np.abs(x)) * b + abs(a)
    assert ly.l1 == pytest.approx(a + b * lx.l1, rel=1e-10, abs=1e-12 * scale)
    for k in ("l2", "l3", "l4"):
        assert getattr(ly, k) == pytest.approx(b * getattr(lx, k), rel=1e-10, abs=1e-11 * scale)
    assert ly.tau3 == pytest.approx(lx.tau3, abs=1e-8)
    assert ly.tau4 == pytest.approx(lx.tau4, abs=1e-8)


@given(st.lists(st.floats(-1e3, 1e3), min_size=4, max_size=30))
def test_sample_ratio_bounds(data):
    lm = sample_lmoments(data)
    if lm.ratios_defined and lm.l2 > 1e-9 * (1 + max(abs(v) for v in data)):
        assert -1 - 1e-9 < lm.tau3 < 1 + 1e-9
        assert lm.tau4 < 1 + 1e-9


def test_l2_unbiased_gaussian():
    rng_seeds = range(20000)
    gauss = FamilySpec(K.GH, g=0.0, h=0.0)
    vals = np.array([sample_lmoments(sample(50, s, gauss).x).l2 for s in rng_seeds])
    se = vals.std(ddof=1) / math.sqrt(vals.size)
    assert abs(vals.mean() - 1 / math.sqrt(math.pi)) < 4 * se


def test_lmoment_set_json_shape():
    d = sample_lmoments([1, 2, 3, 4, 7]).to_dict()
    assert list(d) == ["l1", "l2", "l3", "l4", "tau3", "tau4"]
    assert LMomentSet.from_lmoments(1, 0, 0, 0).tau3 is None


# -- shifted Legendre ------------------------------------------------------------

def test_shifted_legendre_values():
    assert shifted_legendre(1, 0.5) == 0.0
    assert shifted_legendre(2, 1.0) == 1.0
    with pytest.raises(ValueError):
        shifted_legendre(4, 0.5)


def test_shifted_legendre_orthogonality():
    for j in range(4):
        for k in range(4):
            val, _ = integrate.quad(lambda u: shifted_legendre(j, u) * shifted_legendre(k, u), 0, 1)
            assert val == pytest.approx((j == k) / (2 * k + 1), abs=1e-13)


# -- population side ----------------------------------------------------------------

def test_gaussian_population():
    lm = population_lmoments(FamilySpec(K.GH, g=0.0, h=0.0))
    assert lm.l1 == pytest.approx(0.0, abs=1e-14)
    assert lm.l2 == pytest.approx(1 / math.sqrt(math.pi), rel=1e-12)
    assert lm.tau3 == pytest.approx(0.0, abs=1e-13)
    # tau4 of the normal: 30 arctan(sqrt 2)/pi - 9
    assert lm.tau4 == pytest.approx(30 * math.atan(math.sqrt(2)) / math.pi - 9, rel=1e-10)


def test_population_l1_is_mean():
    for spec in (FamilySpec(K.GH, g=0.5, h=0.2), FamilySpec(K.GH, a=2, b=3, g=-1.2, h=0.4),
                 FamilySpec(K.G, g=0.9), FamilySpec(K.GH, g=0.01, h=0.6)):
        assert population_lmoments(spec).l1 == pytest.approx(raw_moment_gh(1, spec), rel=1e-8, abs=1e-12)


def test_population_against_mpmath():
    mp.mp.dps = 25
    g, h = 0.5, 0.2
    r = lambda w: (mp.exp(g * w) - 1) / g * mp.exp(h * w * w / 2)
    P = [lambda u: 1, lambda u: 2 * u - 1, lambda u: 6 * u * u - 6 * u + 1,
         lambda u: 20 * u ** 3 - 30 * u * u + 12 * u - 1]
    lm = population_lmoments(FamilySpec(K.GH, g=g, h=h))
    for k, got in enumerate((lm.l1, lm.l2, lm.l3, lm.l4)):
        want = mp.quad(lambda w: r(w) * P[k](mp.ncdf(w)) * mp.npdf(w), [-mp.inf, -3, 0, 3, mp.inf])
        assert got == pytest.approx(float(want), rel=1e-10, abs=1e-13)


@given(h=st.floats(0, 0.95), k=st.floats(-0.45, 3), seed=st.sampled_from(["h", "gk", "hh"]))
def test_symmetric_l3_vanishes(h, k, seed):
    spec = {"h": FamilySpec(K.H, h=h), "gk": FamilySpec(K.GK, g=0.0, k=k),
            "hh": FamilySpec(K.DoubleHH, h_l=h, h_r=h)}[seed]
    assert abs(population_lmoments(spec).l3) < 1e-10


@given(g=st.floats(-3, 3), h=st.floats(0, 0.95))
def test_population_tau4_bound_gh(g, h):
    lm = population_lmoments(FamilySpec(K.GH, g=g, h=h))
    assert lm.tau4 >= tau4_lower_bound(lm.tau3) - 1e-12
    assert -1 < lm.tau3 < 1 and lm.tau4 <= 1


def test_population_tau4_bound_all_specs(any_spec):
    lm = population_lmoments(any_spec)
    assert lm.l2 > 0
    assert lm.tau4 >= tau4_lower_bound(lm.tau3) - 1e-12


def test_infinite_mean():
    with pytest.raises(MomentDoesNotExist):
        population_lmoments(FamilySpec(K.H, h=1.2))


def test_affine_population():
    unit = population_lmoments(FamilySpec(K.GK, g=0.5, k=0.3))
    moved = population_lmoments(FamilySpec(K.GK, a=3, b=2, g=0.5, k=0.3))
    assert moved.l1 == pytest.approx(3 + 2 * unit.l1, rel=1e-14)
    assert moved.l2 == pytest.approx(2 * unit.l2, rel=1e-14)
    assert moved.tau4 == pytest.approx(unit.tau4, rel=1e-13)


# -- special functions -----------------------------------------------------------------

@pytest.mark.parametrize("x", [1, 3, 0.5, 2.7, 0.01, -0.5, -0.37, 14.2, 300.5, -2.5])
def test_harmonic_against_mpmath(x):
    assert harmonic_number(x) == pytest.approx(float(mp.harmonic(x)), rel=1e-13, abs=1e-13)


def test_harmonic_examples():
    assert harmonic_number(1) == pytest.approx(1.0, abs=1e-14)
    assert harmonic_number(3) == pytest.approx(11 / 6, abs=1e-14)
    assert harmonic_number(0.5) == pytest.approx(2 - 2 * math.log(2), abs=1e-13)
    with pytest.raises(PoleInput):
        harmonic_number(-2)


@pytest.mark.parametrize("m", [0, 1, 2, 3])
@pytest.mark.parametrize("x", [0.05, 0.5, 1.0, 2.3, 17.0])
def test_polygamma_against_mpmath(m, x):
    assert polygamma(m, x) == pytest.approx(float(mp.polygamma(m, x)), rel=1e-12, abs=1e-13)


def test_polygamma_examples():
    assert polygamma(1, 1) == pytest.approx(math.pi ** 2 / 6, rel=1e-13)
    assert polygamma(0, 1) == pytest.approx(-EULER_GAMMA, rel=1e-13)
    assert polygamma(1, 0.5) == pytest.approx(math.pi ** 2 / 2, rel=1e-13)
    with pytest.raises(PoleInput):
        polygamma(1, 0.0)


# -- logistic closed forms -------------------------------------------------------------

@pytest.mark.parametrize("gamma, kappa", [(0.3, 0.1), (-0.4, 0.2), (0.6, 0.3), (0.05, 0.0), (-0.2, 0.7)])
def test_logistic_gk_against_quadrature(gamma, kappa):
    lam1, lam2 = logistic_gk_lambda(gamma, kappa)
    lm = population_lmoments(FamilySpec(K.LogisticGammaKappa, gamma_l=gamma, kappa_l=kappa))
    assert lam1 == pytest.approx(lm.l1, rel=1e-8, abs=1e-10)
    assert lam2 == pytest.approx(lm.l2, rel=1e-8)
    ref = mp_lmoments_logistic(lambda w: (mp.exp(gamma * w) - 1) / gamma * mp.exp(kappa * abs(w)))
    assert lam1 == pytest.approx(ref[0], rel=1e-10, abs=1e-12)
    assert lam2 == pytest.approx(ref[1], rel=1e-10)


def test_logistic_gk_limits_and_errors():
    lam1, lam2 = logistic_gk_lambda(1e-7, 0.0)
    assert lam1 == pytest.approx(0.0, abs=1e-6) and lam2 == pytest.approx(1.0, rel=1e-6)
    assert logistic_gk_lambda(0.0, 0.0) == pytest.approx((0.0, 1.0), abs=1e-13)
    with pytest.raises(ConstraintViolation):
        logistic_gk_lambda(0.5, 0.6)


@pytest.mark.parametrize("kl, kr", [(0.2, 0.2), (0.3, 0.1), (0.0, 0.6), (0.8, 0.05)])
def test_logistic_kk_against_quadrature(kl, kr):
    lam1, lam2 = logistic_kk_lambda(kl, kr)
    lm = population_lmoments(FamilySpec(K.LogisticKappaKappa, kappa_left=kl, kappa_right=kr))
    assert lam1 == pytest.approx(lm.l1, rel=1e-8, abs=1e-10)
    assert lam2 == pytest.approx(lm.l2, rel=1e-8)
    ref = mp_lmoments_logistic(lambda w: w * mp.exp((kl if w < 0 else kr) * abs(w)))
    assert lam1 == pytest.approx(ref[0], rel=1e-10, abs=1e-12)
    assert lam2 == pytest.approx(ref[1], rel=1e-10)


def test_logistic_kk_symmetry_and_errors():
    assert logistic_kk_lambda(0.35, 0.35)[0] == pytest.approx(0.0, abs=1e-14)
    with pytest.raises(ConstraintViolation):
        logistic_kk_lambda(1.2, 0.1)
