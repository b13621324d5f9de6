import json
import os
import subprocess
import sys

import numpy as np
import pytest

from quantfam import kernels
from quantfam.families import FamilyKind, FamilySpec

from conftest import TEST_SPECS

needs_numba = pytest.mark.skipif(kernels.numba_impl is None, reason="numba backend disabled")


def _z_values(spec):
    code, p = spec.kernel()
    w = np.linspace(-7, 7, 57)
    return code, p, kernels.r0(code, p, w), w


@needs_numba
@pytest.mark.parametrize("name", sorted(TEST_SPECS))
def test_invert_parity(name):
    code, p, z, w = _z_values(TEST_SPECS[name])
    thr = np.full(z.shape, 1e-13)
    w_np, s_np = kernels.numpy_impl.invert(code, p, z, thr, 200, 2.0)
    w_nb, s_nb = kernels.numba_impl.invert(code, p, z, thr, 200, 2.0)
    np.testing.assert_array_equal(s_np, s_nb)
    np.testing.assert_allclose(w_nb, w_np, rtol=1e-12, atol=1e-12)
    np.testing.assert_allclose(w_nb, w, rtol=1e-9, atol=1e-9)


@needs_numba
@pytest.mark.parametrize("name", sorted(TEST_SPECS))
def test_lmoment_parity(name):
    code, p = TEST_SPECS[name].kernel()
    a_np, ok_np = kernels.numpy_impl.lmoment_integrals(code, p, 1e-12, 1e-12)
    a_nb, ok_nb = kernels.numba_impl.lmoment_integrals(code, p, 1e-12, 1e-12)
    assert bool(ok_np) and bool(ok_nb)
    np.testing.assert_allclose(a_nb, a_np, rtol=1e-13, atol=1e-14)


@needs_numba
@pytest.mark.parametrize("name", sorted(TEST_SPECS))
def test_log_likelihood_parity(name):
    spec = TEST_SPECS[name]
    code, p = spec.kernel()
    x = np.random.default_rng(1).standard_normal(300)
    lo, hi = kernels.unit_support(code, p)
    x = np.clip(x, lo + 0.05, hi - 0.05) if np.isfinite(lo) or np.isfinite(hi) else x
    ll_np = kernels.numpy_impl.log_likelihood(code, p, x, 0.0, 1.0, 1e-12, 200, 2.0)
    ll_nb = kernels.numba_impl.log_likelihood(code, p, x, 0.0, 1.0, 1e-12, 200, 2.0)
    assert np.isfinite(ll_np)
    assert ll_nb == pytest.approx(ll_np, rel=1e-11, abs=1e-9)


@needs_numba
def test_log_likelihood_outside_support_is_minus_inf():
    code, p = FamilySpec(FamilyKind.G, g=1.0).kernel()
    x = np.array([-2.0, 0.0, 1.0])
    for impl in (kernels.numpy_impl, kernels.numba_impl):
        assert impl.log_likelihood(code, p, x, 0.0, 1.0, 1e-12, 200, 2.0) == -np.inf


@needs_numba
def test_min_derivative_parity():
    grid = np.linspace(-8, 8, 801)
    for spec in (FamilySpec(FamilyKind.GK, g=5.0, k=-0.45), TEST_SPECS["gk"]):
        code, p = spec.kernel()
        d_np = kernels.numpy_impl.dr0(code, p, grid)
        d, w = kernels.numba_impl.min_derivative(code, p, grid)
        assert d == pytest.approx(d_np.min(), rel=1e-13)
        assert w == grid[np.argmin(d_np)]


def test_polynomial_specs_use_numpy():
    code, p = FamilySpec(FamilyKind.GH, g=0.1, h=0.1, g_poly=(0.01,)).kernel()
    assert kernels.backend(code, p) == "numpy"


_CHILD = """
import json, numpy as np
from quantfam import kernels, _accel
from quantfam.families import FamilySpec
from quantfam.lmoments import population_lmoments
from quantfam.distributions import cdf
spec = FamilySpec("gh", g=0.5, h=0.2)
lm = population_lmoments(spec)
print(json.dumps({"use_numba": _accel.USE_NUMBA, "impl": kernels.numba_impl is None,
                  "backend": kernels.backend(*spec.kernel()),
                  "l": [lm.l1, lm.l2, lm.l3, lm.l4], "cdf": list(cdf(np.array([-1.0, 0.3, 4.0]), spec))}))
"""


def _run_child(flag):
    env = dict(os.environ, QUANTFAM_NUMBA=flag)
    out = subprocess.run([sys.executable, "-c", _CHILD], env=env, capture_output=True,
                         text=True, check=True, timeout=600)
    return json.loads(out.stdout.strip().splitlines()[-1])


def test_env_flag_selects_numpy_backend_and_results_match():
    off = _run_child("0")
    assert off["use_numba"] is False and off["impl"] is True and off["backend"] == "numpy"
    on = _run_child("1")
    if on["use_numba"]:
        assert on["backend"] == "numba"
        np.testing.assert_allclose(on["l"], off["l"], rtol=1e-12, atol=1e-14)
        np.testing.assert_allclose(on["cdf"], off["cdf"], rtol=1e-12)
