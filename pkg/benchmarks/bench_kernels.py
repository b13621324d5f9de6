"""Compare the numba and numpy kernel backends on the hot paths.

Run with ``python3 benchmarks/bench_kernels.py``.  Each kernel is timed on
both backends in the same process (numba after a warm-up call so JIT
compilation is excluded) and the largest absolute difference between the
two results is reported alongside the speed-up.
"""
import argparse
import sys
import timeit

import numpy as np

from quantfam import kernels
from quantfam.families import FamilyKind, FamilySpec


def _cases(n_obs):
    rng = np.random.default_rng(0)
    x = rng.standard_normal(n_obs) * 1.3 + 0.2
    gh = FamilySpec(FamilyKind.GH, g=0.5, h=0.2)
    gk = FamilySpec(FamilyKind.GK, g=0.4, k=0.3)
    hh = FamilySpec(FamilyKind.DoubleHH, h_l=0.1, h_r=0.3)
    for name, spec in (("gh", gh), ("gk", gk), ("hh", hh)):
        code, p = spec.kernel()
        thr = np.full(x.size, 1e-12)
        yield (f"invert[{name}] n={n_obs}",
               lambda impl, code=code, p=p: impl.invert(code, p, x, thr, 200, 2.0)[0])
        yield (f"log_likelihood[{name}] n={n_obs}",
               lambda impl, code=code, p=p: impl.log_likelihood(code, p, x, 0.0, 1.0, 1e-12, 200, 2.0))
        yield (f"lmoment_integrals[{name}]",
               lambda impl, code=code, p=p: impl.lmoment_integrals(code, p, 1e-12, 1e-12)[0])


def _time(fn, repeat):
    fn()
    loops, _ = timeit.Timer(fn).autorange()
    return min(timeit.repeat(fn, number=loops, repeat=repeat)) / loops


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--n", type=int, default=1000, help="observations for invert/likelihood")
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args(argv)
    if kernels.numba_impl is None:
        print("numba backend disabled (QUANTFAM_NUMBA=0 or numba missing); nothing to compare")
        return 0
    print(f"{'kernel':34s} {'numpy [ms]':>11s} {'numba [ms]':>11s} {'speed-up':>9s} {'max |diff|':>11s}")
    for name, run in _cases(args.n):
        ref = np.asarray(run(kernels.numpy_impl))
        fast = np.asarray(run(kernels.numba_impl))
        diff = float(np.max(np.abs(ref - fast))) if np.all(np.isfinite(ref)) else float("nan")
        t_np = _time(lambda: run(kernels.numpy_impl), args.repeat)
        t_nb = _time(lambda: run(kernels.numba_impl), args.repeat)
        print(f"{name:34s} {1e3 * t_np:11.3f} {1e3 * t_nb:11.3f} {t_np / t_nb:8.1f}x {diff:11.2e}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
