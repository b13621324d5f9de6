import os

import pytest
from hypothesis import HealthCheck, settings

from quantfam.families import FamilyKind, FamilySpec

settings.register_profile("default", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

K = FamilyKind

# monotone specs covering every family, used by the round-trip style tests
TEST_SPECS = {
    "gh_heavy": FamilySpec(K.GH, g=0.5, h=0.2),
    "gh_light": FamilySpec(K.GH, a=1.5, b=2.0, g=-0.3, h=0.05),
    "gauss": FamilySpec(K.GH, g=0.0, h=0.0),
    "g": FamilySpec(K.G, g=0.7),
    "h": FamilySpec(K.H, a=-1.0, b=0.5, h=0.3),
    "ggh": FamilySpec(K.GeneralizedGH, g=0.6, h=0.1),
    "gk": FamilySpec(K.GK, g=0.5, k=0.3),
    "gk_neg": FamilySpec(K.GK, g=0.0, k=-0.2),
    "gj": FamilySpec(K.GJ, g=0.4),
    "hh": FamilySpec(K.DoubleHH, h_l=0.1, h_r=0.3),
    "hjk": FamilySpec(K.SuperHJK, alpha_s=1.0, beta_s=1.5, gamma_s=0.5),
    "lgk": FamilySpec(K.LogisticGammaKappa, gamma_l=0.3, kappa_l=0.1),
    "lkk": FamilySpec(K.LogisticKappaKappa, kappa_left=0.2, kappa_right=0.1),
}


@pytest.fixture(params=sorted(TEST_SPECS))
def any_spec(request):
    return TEST_SPECS[request.param]


# one verdict line per acceptance criterion, repeated in the terminal summary
ACCEPTANCE: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE):
            terminalreporter.write_line(line)
