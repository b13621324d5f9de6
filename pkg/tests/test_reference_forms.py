"""The published closed forms integrate against a variance-1/2 base."""
import math

import pytest

from quantfam.distributions import raw_moment_gh
from quantfam.families import FamilyKind, FamilySpec
from quantfam.lmoments import population_lmoments
from quantfam.reference_forms import g_l1, gh_l1, h_l2, half_variance_l1


@pytest.mark.parametrize("g, h", [(0.5, 0.2), (0.3, 0.0), (-0.8, 0.4)])
def test_gh_l1_is_the_half_variance_integral(g, h):
    assert gh_l1(g, h) == pytest.approx(half_variance_l1(g, h), rel=1e-10)


@pytest.mark.parametrize("g, h", [(0.5, 0.2), (-0.8, 0.4)])
def test_gh_l1_differs_from_canonical(g, h):
    canonical = population_lmoments(FamilySpec(FamilyKind.GH, g=g, h=h)).l1
    assert canonical == pytest.approx(raw_moment_gh(1, FamilySpec(FamilyKind.GH, g=g, h=h)), rel=1e-9)
    assert abs(gh_l1(g, h) - canonical) > 1e-3


def test_g_l1_matches_mean_but_not_its_kernel():
    g = 0.7
    assert g_l1(g) == pytest.approx(raw_moment_gh(1, FamilySpec(FamilyKind.G, g=g)), rel=1e-13)
    assert half_variance_l1(g, 0.0) == pytest.approx(math.expm1(g * g / 4) / g, rel=1e-10)


def test_h_l2_is_neither_kernel_nor_canonical():
    h = 0.2
    q = 1 - h
    kernel_value = 1 / (2 * math.sqrt(math.pi) * q * math.sqrt(1 + 2 * q))
    canonical = population_lmoments(FamilySpec(FamilyKind.H, h=h)).l2
    printed = h_l2(h)
    assert abs(printed - kernel_value) > 0.1
    assert abs(printed - canonical) > 0.1


def test_gh_l1_domain():
    with pytest.raises(ValueError):
        gh_l1(0.5, 2.0)
