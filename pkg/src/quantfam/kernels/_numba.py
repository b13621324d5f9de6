"""Numba kernels mirroring :mod:`._numpy` one element at a time.

Polynomial g(w)/h(w) coefficients are not handled here; the dispatcher
routes those specs to the numpy path.
"""
import math

import numpy as np
from numba import njit

from ._common import (
    ABOVE_SUPPORT, BELOW_SUPPORT, G_EPS, GGH, GH, GJ, GK, GK_NODES, GK_WG,
    GK_WK, HH, HJK, LGK, LKK, LOG_SQRT_2PI, LOG_TAIL_CUT, MAX_INTERVALS,
    MAX_LEVELS, N_INITIAL, NO_CONVERGENCE, OK, SQRT_HALF, TAIL_GROWTH,
    TAIL_MAX, TAIL_START,
)

# numpy error semantics: float division by zero yields inf/nan, not an exception
_jit = njit(cache=True, error_model="numpy")

_NODES = GK_NODES.copy()
_WK = GK_WK.copy()
_WG = GK_WG.copy()


@_jit
def _phi1(u):
    if abs(u) < 1e-8:
        return 1.0 + 0.5 * u
    return math.expm1(u) / u


@_jit
def _log_phi1(u):
    if u > 1.0:
        return u + math.log(-math.expm1(-u)) - math.log(u)
    if u < -1.0:
        return math.log(-math.expm1(u)) - math.log(-u)
    return math.log(_phi1(u))


@_jit
def _log_cosh(w):
    aw = abs(w)
    return aw + math.log1p(math.exp(-2.0 * aw)) - math.log(2.0)


@_jit
def _sign(w):
    if w > 0.0:
        return 1.0
    if w < 0.0:
        return -1.0
    return 0.0


@_jit
def _exp(x):
    if x > 709.78:
        return math.inf
    return math.exp(x)


@_jit
def r0(code, p, w):
    if code == GH:
        g, h = p[0], p[1]
        if abs(g) < G_EPS:
            core = w
        else:
            core = math.expm1(g * w) / g
        return core * _exp(0.5 * h * w * w)
    if code == GGH:
        t = math.tanh(0.5 * p[0] * w)
        return (1.0 + p[2] * t) * w * _exp(0.5 * p[1] * w * w)
    if code == GK:
        t = math.tanh(0.5 * p[0] * w)
        return (1.0 + p[2] * t) * w * (1.0 + w * w) ** p[1]
    if code == GJ:
        t = math.tanh(0.5 * p[0] * w)
        return (1.0 + p[1] * t) * w * math.cosh(w)
    if code == HH:
        h = p[0] if w < 0.0 else p[1]
        return w * _exp(0.5 * h * w * w)
    if code == HJK:
        alpha, beta, gam = p[0], p[1], p[2]
        s = w * w + gam
        return w * (1.0 + (s ** alpha - gam ** alpha) / beta) ** beta
    if code == LGK:
        gam, kap = p[0], p[1]
        if abs(gam) < G_EPS:
            core = w
        else:
            core = math.expm1(gam * w) / gam
        return core * _exp(kap * abs(w))
    # LKK
    kap = p[0] if w < 0.0 else p[1]
    return w * _exp(kap * abs(w))


@_jit
def dr0(code, p, w):
    if code == GH:
        g, h = p[0], p[1]
        e = _exp(0.5 * h * w * w)
        if abs(g) < G_EPS:
            return e * (1.0 + h * w * w)
        return e * (_exp(g * w) + h * w * math.expm1(g * w) / g)
    if code == GGH or code == GK or code == GJ:
        c = p[1] if code == GJ else p[2]
        t = math.tanh(0.5 * p[0] * w)
        gs = 1.0 + c * t
        dgs = 0.5 * c * p[0] * (1.0 - t * t)
        if code == GGH:
            e = _exp(0.5 * p[1] * w * w)
            return dgs * w * e + gs * e * (1.0 + p[1] * w * w)
        if code == GK:
            k = p[1]
            q = 1.0 + w * w
            return dgs * w * q ** k + gs * q ** (k - 1.0) * (1.0 + (2.0 * k + 1.0) * w * w)
        return dgs * w * math.cosh(w) + gs * (math.cosh(w) + w * math.sinh(w))
    if code == HH:
        h = p[0] if w < 0.0 else p[1]
        return (1.0 + h * w * w) * _exp(0.5 * h * w * w)
    if code == HJK:
        alpha, beta, gam = p[0], p[1], p[2]
        s = w * w + gam
        base = 1.0 + (s ** alpha - gam ** alpha) / beta
        return base ** beta + w * base ** (beta - 1.0) * 2.0 * alpha * w * s ** (alpha - 1.0)
    if code == LGK:
        gam, kap = p[0], p[1]
        e = _exp(kap * abs(w))
        if abs(gam) < G_EPS:
            core = w
        else:
            core = math.expm1(gam * w) / gam
        return e * (_exp(gam * w) + kap * _sign(w) * core)
    kap = p[0] if w < 0.0 else p[1]
    aw = abs(w)
    return _exp(kap * aw) * (1.0 + kap * aw)


@_jit
def log_abs_r0(code, p, w):
    if w == 0.0:
        return -math.inf
    lw = math.log(abs(w))
    if code == GH:
        lg = 0.0 if abs(p[0]) < G_EPS else _log_phi1(p[0] * w)
        return lw + lg + 0.5 * p[1] * w * w
    if code == GGH:
        return math.log(1.0 + p[2] * math.tanh(0.5 * p[0] * w)) + lw + 0.5 * p[1] * w * w
    if code == GK:
        return math.log(1.0 + p[2] * math.tanh(0.5 * p[0] * w)) + lw + p[1] * math.log1p(w * w)
    if code == GJ:
        return math.log(1.0 + p[1] * math.tanh(0.5 * p[0] * w)) + lw + _log_cosh(w)
    if code == HH:
        h = p[0] if w < 0.0 else p[1]
        return lw + 0.5 * h * w * w
    if code == HJK:
        alpha, beta, gam = p[0], p[1], p[2]
        s = w * w + gam
        return lw + beta * math.log1p((s ** alpha - gam ** alpha) / beta)
    if code == LGK:
        lg = 0.0 if abs(p[0]) < G_EPS else _log_phi1(p[0] * w)
        return lw + lg + p[1] * abs(w)
    kap = p[0] if w < 0.0 else p[1]
    return lw + kap * abs(w)


@_jit
def log_base_pdf(code, w):
    if code == LGK or code == LKK:
        aw = abs(w)
        return -aw - 2.0 * math.log1p(math.exp(-aw))
    return -0.5 * w * w - LOG_SQRT_2PI


@_jit
def base_cdf(code, w):
    if code == LGK or code == LKK:
        return 1.0 / (1.0 + _exp(-w))
    return 0.5 * math.erfc(-w * SQRT_HALF)


@_jit
def unit_support(code, p):
    if (code == GH and p[1] == 0.0) or (code == LGK and p[1] == 0.0):
        if abs(p[0]) >= G_EPS:
            bound = -1.0 / p[0]
            if p[0] > 0.0:
                return bound, math.inf
            return -math.inf, bound
    return -math.inf, math.inf


@_jit
def invert_one(code, p, z, thr, max_iter, expansion):
    zlo, zhi = unit_support(code, p)
    if z <= zlo:
        return 0.0, BELOW_SUPPORT
    if z >= zhi:
        return 0.0, ABOVE_SUPPORT
    if z == 0.0:
        return 0.0, OK
    pos = z > 0.0
    if pos:
        lo, hi = 0.0, 1.0
    else:
        lo, hi = -1.0, 0.0
    while True:
        if pos:
            val = r0(code, p, hi)
            if val >= z:
                break
            lo = hi
            hi = hi * expansion
            if abs(hi) > 1e300:
                return 0.0, ABOVE_SUPPORT
        else:
            val = r0(code, p, lo)
            if val <= z:
                break
            hi = lo
            lo = lo * expansion
            if abs(lo) > 1e300:
                return 0.0, BELOW_SUPPORT
    if z > lo and z < hi:
        w = z
    else:
        w = 0.5 * (lo + hi)
    for _ in range(max_iter):
        f = r0(code, p, w) - z
        if abs(f) <= thr:
            return w, OK
        if f > 0.0:
            hi = w
        else:
            lo = w
        d = dr0(code, p, w)
        wn = w - f / d
        if not (wn > lo and wn < hi) or not (d > 0.0) or not math.isfinite(wn):
            wn = 0.5 * (lo + hi)
        collapsed = wn == w or hi - lo <= 4e-16 * max(1.0, abs(w))
        w = wn
        if collapsed:
            return w, OK
    return w, NO_CONVERGENCE


@_jit
def invert(code, p, z, thr, max_iter, expansion):
    n = z.shape[0]
    w = np.empty(n)
    status = np.empty(n, dtype=np.int8)
    for i in range(n):
        wi, si = invert_one(code, p, z[i], thr[i], max_iter, expansion)
        w[i] = wi
        status[i] = si
    return w, status


@_jit
def log_likelihood(code, p, x, a, b, thr_abs, max_iter, expansion):
    total = 0.0
    logb = math.log(b)
    for i in range(x.shape[0]):
        xi = x[i]
        z = (xi - a) / b
        thr = thr_abs * max(1.0, abs(xi)) / b
        w, st = invert_one(code, p, z, thr, max_iter, expansion)
        if st != OK:
            return -math.inf
        d = dr0(code, p, w)
        if not (d > 0.0):
            return -math.inf
        total += log_base_pdf(code, w) - logb - math.log(d)
    if not math.isfinite(total):
        return -math.inf
    return total


@_jit
def tail_cutoff(code, p, side):
    ell = TAIL_START
    while ell <= TAIL_MAX:
        w = side * ell
        if log_abs_r0(code, p, w) + log_base_pdf(code, w) < LOG_TAIL_CUT:
            return ell
        ell *= TAIL_GROWTH
    return math.nan


@_jit
def _interval_rule(code, p, a, b, out_k, out_g):
    c = 0.5 * (a + b)
    hw = 0.5 * (b - a)
    for k in range(4):
        out_k[k] = 0.0
        out_g[k] = 0.0
    for j in range(15):
        w = c + hw * _NODES[j]
        lm = log_abs_r0(code, p, w) + log_base_pdf(code, w)
        v = _sign(w) * _exp(lm) if lm > -745.0 else 0.0
        u = base_cdf(code, w)
        v1 = v * (2.0 * u - 1.0)
        v2 = v * ((6.0 * u - 6.0) * u + 1.0)
        v3 = v * (((20.0 * u - 30.0) * u + 12.0) * u - 1.0)
        wk = _WK[j]
        wg = _WG[j]
        out_k[0] += v * wk
        out_k[1] += v1 * wk
        out_k[2] += v2 * wk
        out_k[3] += v3 * wk
        out_g[0] += v * wg
        out_g[1] += v1 * wg
        out_g[2] += v2 * wg
        out_g[3] += v3 * wg
    for k in range(4):
        out_k[k] *= hw
        out_g[k] *= hw


@_jit
def lmoment_integrals(code, p, atol, rtol):
    acc = np.zeros(4)
    left = tail_cutoff(code, p, -1.0)
    right = tail_cutoff(code, p, 1.0)
    if not (math.isfinite(left) and math.isfinite(right)):
        acc[:] = math.nan
        return acc, False
    total_width = left + right
    cap = 2 * MAX_INTERVALS + 2 * N_INITIAL
    a = np.empty(cap)
    b = np.empty(cap)
    m = 2 * N_INITIAL
    # same edges as np.linspace
    step_l = left / N_INITIAL
    step_r = right / N_INITIAL
    for i in range(N_INITIAL):
        a[i] = i * step_l - left
        b[i] = (i + 1) * step_l - left
        a[N_INITIAL + i] = i * step_r
        b[N_INITIAL + i] = (i + 1) * step_r
    b[N_INITIAL - 1] = 0.0
    b[2 * N_INITIAL - 1] = right
    kron = np.empty((cap, 4))
    err = np.empty(cap)
    ok = np.empty(cap, dtype=np.bool_)
    gk = np.empty(4)
    converged = True
    na = np.empty(cap)
    nb = np.empty(cap)
    for level in range(MAX_LEVELS):
        est = acc.copy()
        for i in range(m):
            _interval_rule(code, p, a[i], b[i], kron[i], gk)
            e = 0.0
            for k in range(4):
                d = abs(kron[i, k] - gk[k])
                if d > e or d != d:
                    e = d
                est[k] += kron[i, k]
            err[i] = e
        emax = 0.0
        for k in range(4):
            if abs(est[k]) > emax:
                emax = abs(est[k])
        scale = max(atol, rtol * emax)
        nbad = 0
        for i in range(m):
            ok[i] = err[i] <= scale * (b[i] - a[i]) / total_width
            if not ok[i]:
                nbad += 1
        last = level == MAX_LEVELS - 1 or 2 * nbad > MAX_INTERVALS
        if last and nbad > 0:
            converged = False
            for i in range(m):
                ok[i] = True
            nbad = 0
        for i in range(m):
            if ok[i]:
                for k in range(4):
                    acc[k] += kron[i, k]
        if nbad == 0:
            break
        j = 0
        for i in range(m):
            if not ok[i]:
                mid = 0.5 * (a[i] + b[i])
                na[j] = a[i]
                nb[j] = mid
                na[j + 1] = mid
                nb[j + 1] = b[i]
                j += 2
        m = j
        a[:m] = na[:m]
        b[:m] = nb[:m]
    return acc, converged


@_jit
def min_derivative(code, p, grid):
    best = math.inf
    arg = 0.0
    for i in range(grid.shape[0]):
        d = dr0(code, p, grid[i])
        if not (d > best):
            if d != d:
                return d, grid[i]
            best = d
            arg = grid[i]
    return best, arg
