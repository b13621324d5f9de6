"""Vectorized numpy kernels.

These are the reference implementations; :mod:`._numba` mirrors them loop
by loop.  All functions work on the unit transform (a=0, b=1).
"""
import numpy as np
from scipy.special import ndtr

from ._common import (
    ABOVE_SUPPORT, BELOW_SUPPORT, G_EPS, GGH, GH, GJ, GK, GK_NODES, GK_WG,
    GK_WK, HH, HJK, LGK, LKK, LOG_SQRT_2PI, LOG_TAIL_CUT, LOGISTIC_CODES,
    MAX_INTERVALS, MAX_LEVELS, N_INITIAL, NO_CONVERGENCE, OK, TAIL_GROWTH,
    TAIL_MAX, TAIL_START,
)


def _gh_poly(p):
    ng, nh = int(p[2]), int(p[3])
    gc = np.r_[p[0], p[4:4 + ng]]
    hc = np.r_[p[1], p[4 + ng:4 + ng + nh]]
    return gc, hc


def _polyval(coef, w):
    # coef[0] + coef[1] w + coef[2] w^2 + ...
    out = np.zeros_like(w) + coef[-1]
    for c in coef[-2::-1]:
        out = out * w + c
    return out


def _polyder(coef, w):
    if len(coef) < 2:
        return np.zeros_like(w)
    return _polyval(coef[1:] * np.arange(1, len(coef)), w)


def _phi1(u):
    """expm1(u) / u, continuous at 0."""
    small = np.abs(u) < 1e-8
    safe = np.where(small, 1.0, u)
    return np.where(small, 1.0 + 0.5 * u, np.expm1(safe) / safe)


def _dphi1(u):
    small = np.abs(u) < 1e-4
    safe = np.where(small, 1.0, u)
    big = (safe * np.exp(safe) - np.expm1(safe)) / (safe * safe)
    return np.where(small, 0.5 + u / 3.0 + u * u / 8.0, big)


def _log_phi1(u):
    """log(expm1(u) / u) without overflow."""
    au = np.abs(u)
    safe = np.where(au > 1.0, u, 2.0)
    pos = safe + np.log(-np.expm1(-safe)) - np.log(safe)
    neg_safe = np.where(u < -1.0, u, -2.0)
    neg = np.log(-np.expm1(neg_safe)) - np.log(-neg_safe)
    mid = np.log(_phi1(np.where(au <= 1.0, u, 0.0)))
    return np.where(u > 1.0, pos, np.where(u < -1.0, neg, mid))


def _gstar(g, c, w):
    t = np.tanh(0.5 * g * w)
    return 1.0 + c * t, 0.5 * c * g * (1.0 - t * t)


def _log_cosh(w):
    aw = np.abs(w)
    return aw + np.log1p(np.exp(-2.0 * aw)) - np.log(2.0)


def _has_poly(code, p):
    return code == GH and (p[2] > 0 or p[3] > 0)


def r0(code, p, w):
    """Unit transform r0(w)."""
    w = np.asarray(w, dtype=float)
    with np.errstate(over="ignore", invalid="ignore"):
        if code == GH:
            if _has_poly(code, p):
                gc, hc = _gh_poly(p)
                gw = _polyval(gc, w)
                hw = _polyval(hc, w)
                return w * _phi1(gw * w) * np.exp(0.5 * hw * w * w)
            g, h = p[0], p[1]
            core = w if abs(g) < G_EPS else np.expm1(g * w) / g
            return core * np.exp(0.5 * h * w * w)
        if code == GGH:
            gs, _ = _gstar(p[0], p[2], w)
            return gs * w * np.exp(0.5 * p[1] * w * w)
        if code == GK:
            gs, _ = _gstar(p[0], p[2], w)
            return gs * w * (1.0 + w * w) ** p[1]
        if code == GJ:
            gs, _ = _gstar(p[0], p[1], w)
            return gs * w * np.cosh(w)
        if code == HH:
            h = np.where(w < 0.0, p[0], p[1])
            return w * np.exp(0.5 * h * w * w)
        if code == HJK:
            alpha, beta, gam = p[0], p[1], p[2]
            s = w * w + gam
            return w * (1.0 + (s ** alpha - gam ** alpha) / beta) ** beta
        if code == LGK:
            gam, kap = p[0], p[1]
            core = w if abs(gam) < G_EPS else np.expm1(gam * w) / gam
            return core * np.exp(kap * np.abs(w))
        if code == LKK:
            kap = np.where(w < 0.0, p[0], p[1])
            return w * np.exp(kap * np.abs(w))
    raise ValueError(f"unknown family code {code}")


def dr0(code, p, w):
    """Derivative of the unit transform."""
    w = np.asarray(w, dtype=float)
    with np.errstate(over="ignore", invalid="ignore"):
        if code == GH:
            if _has_poly(code, p):
                gc, hc = _gh_poly(p)
                gw, dg = _polyval(gc, w), _polyder(gc, w)
                hw, dh = _polyval(hc, w), _polyder(hc, w)
                u = gw * w
                e = np.exp(0.5 * hw * w * w)
                core = w * _phi1(u)
                dcore = _phi1(u) + w * _dphi1(u) * (dg * w + gw)
                return dcore * e + core * e * (0.5 * dh * w * w + hw * w)
            g, h = p[0], p[1]
            e = np.exp(0.5 * h * w * w)
            if abs(g) < G_EPS:
                return e * (1.0 + h * w * w)
            return e * (np.exp(g * w) + h * w * np.expm1(g * w) / g)
        if code == GGH:
            gs, dgs = _gstar(p[0], p[2], w)
            e = np.exp(0.5 * p[1] * w * w)
            return dgs * w * e + gs * e * (1.0 + p[1] * w * w)
        if code == GK:
            gs, dgs = _gstar(p[0], p[2], w)
            k = p[1]
            q = 1.0 + w * w
            return dgs * w * q ** k + gs * q ** (k - 1.0) * (1.0 + (2.0 * k + 1.0) * w * w)
        if code == GJ:
            gs, dgs = _gstar(p[0], p[1], w)
            return dgs * w * np.cosh(w) + gs * (np.cosh(w) + w * np.sinh(w))
        if code == HH:
            h = np.where(w < 0.0, p[0], p[1])
            return (1.0 + h * w * w) * np.exp(0.5 * h * w * w)
        if code == HJK:
            alpha, beta, gam = p[0], p[1], p[2]
            s = w * w + gam
            base = 1.0 + (s ** alpha - gam ** alpha) / beta
            t = base ** beta
            dt = base ** (beta - 1.0) * 2.0 * alpha * w * s ** (alpha - 1.0)
            return t + w * dt
        if code == LGK:
            gam, kap = p[0], p[1]
            e = np.exp(kap * np.abs(w))
            core = w if abs(gam) < G_EPS else np.expm1(gam * w) / gam
            return e * (np.exp(gam * w) + kap * np.sign(w) * core)
        if code == LKK:
            kap = np.where(w < 0.0, p[0], p[1])
            aw = np.abs(w)
            return np.exp(kap * aw) * (1.0 + kap * aw)
    raise ValueError(f"unknown family code {code}")


def log_abs_r0(code, p, w):
    """log|r0(w)|; r0 carries the sign of w for every admissible spec."""
    w = np.asarray(w, dtype=float)
    with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
        lw = np.log(np.abs(w))
        if code == GH:
            if _has_poly(code, p):
                gc, hc = _gh_poly(p)
                gw = _polyval(gc, w)
                hw = _polyval(hc, w)
                return lw + _log_phi1(gw * w) + 0.5 * hw * w * w
            g, h = p[0], p[1]
            lg = 0.0 if abs(g) < G_EPS else _log_phi1(g * w)
            return lw + lg + 0.5 * h * w * w
        if code == GGH:
            gs, _ = _gstar(p[0], p[2], w)
            return np.log(gs) + lw + 0.5 * p[1] * w * w
        if code == GK:
            gs, _ = _gstar(p[0], p[2], w)
            return np.log(gs) + lw + p[1] * np.log1p(w * w)
        if code == GJ:
            gs, _ = _gstar(p[0], p[1], w)
            return np.log(gs) + lw + _log_cosh(w)
        if code == HH:
            h = np.where(w < 0.0, p[0], p[1])
            return lw + 0.5 * h * w * w
        if code == HJK:
            alpha, beta, gam = p[0], p[1], p[2]
            s = w * w + gam
            return lw + beta * np.log1p((s ** alpha - gam ** alpha) / beta)
        if code == LGK:
            gam, kap = p[0], p[1]
            lg = 0.0 if abs(gam) < G_EPS else _log_phi1(gam * w)
            return lw + lg + kap * np.abs(w)
        if code == LKK:
            kap = np.where(w < 0.0, p[0], p[1])
            return lw + kap * np.abs(w)
    raise ValueError(f"unknown family code {code}")


def log_base_pdf(code, w):
    w = np.asarray(w, dtype=float)
    if code in LOGISTIC_CODES:
        aw = np.abs(w)
        return -aw - 2.0 * np.log1p(np.exp(-aw))
    return -0.5 * w * w - LOG_SQRT_2PI


def base_cdf(code, w):
    w = np.asarray(w, dtype=float)
    if code in LOGISTIC_CODES:
        with np.errstate(over="ignore"):
            return 1.0 / (1.0 + np.exp(-w))
    return ndtr(w)


def unit_support(code, p):
    """Range (lo, hi) of r0 over the real line."""
    if code == GH and not _has_poly(code, p) and p[1] == 0.0 and abs(p[0]) >= G_EPS:
        bound = -1.0 / p[0]
        return (bound, np.inf) if p[0] > 0 else (-np.inf, bound)
    if code == LGK and p[1] == 0.0 and abs(p[0]) >= G_EPS:
        bound = -1.0 / p[0]
        return (bound, np.inf) if p[0] > 0 else (-np.inf, bound)
    return -np.inf, np.inf


def invert(code, p, z, thr, max_iter, expansion):
    """Solve r0(w) = z elementwise.

    Bracket from w=0 by geometric expansion, then safeguarded Newton with a
    bisection fallback.  Returns ``(w, status)``.
    """
    z = np.atleast_1d(np.asarray(z, dtype=float))
    thr = np.broadcast_to(np.asarray(thr, dtype=float), z.shape)
    w = np.zeros_like(z)
    status = np.full(z.shape, OK, dtype=np.int8)
    zlo, zhi = unit_support(code, p)
    status[z <= zlo] = BELOW_SUPPORT
    status[z >= zhi] = ABOVE_SUPPORT
    todo = (status == OK) & (z != 0.0)

    pos = todo & (z > 0)
    neg = todo & (z < 0)
    lo = np.where(pos, 0.0, -1.0)
    hi = np.where(pos, 1.0, 0.0)
    # expand the outer end of each bracket until r0 crosses z
    grow = todo.copy()
    while grow.any():
        edge = np.where(pos, hi, lo)
        val = r0(code, p, edge)
        need = grow & ((pos & ~(val >= z)) | (neg & ~(val <= z)))
        if not need.any():
            break
        lo = np.where(need & pos, hi, lo)
        hi = np.where(need & pos, hi * expansion, hi)
        hi = np.where(need & neg, lo, hi)
        lo = np.where(need & neg, lo * expansion, lo)
        blown = need & (np.abs(np.where(pos, hi, lo)) > 1e300)
        status[blown & pos] = ABOVE_SUPPORT
        status[blown & neg] = BELOW_SUPPORT
        grow = need & ~blown
    todo &= status == OK

    w = np.where(todo & (z > lo) & (z < hi), z, 0.5 * (lo + hi))
    w = np.where(todo, w, 0.0)
    active = todo.copy()
    for _ in range(max_iter):
        if not active.any():
            break
        f = r0(code, p, w) - z
        done = active & (np.abs(f) <= thr)
        active &= ~done
        hi = np.where(active & (f > 0), w, hi)
        lo = np.where(active & ~(f > 0), w, lo)
        d = dr0(code, p, w)
        with np.errstate(divide="ignore", invalid="ignore"):
            wn = w - f / d
        bad = ~((wn > lo) & (wn < hi)) | ~(d > 0) | ~np.isfinite(wn)
        wn = np.where(bad, 0.5 * (lo + hi), wn)
        collapsed = active & ((wn == w) | (hi - lo <= 4e-16 * np.maximum(1.0, np.abs(w))))
        w = np.where(active, wn, w)
        active &= ~collapsed
    status[active] = NO_CONVERGENCE
    return w, status


def log_likelihood(code, p, x, a, b, thr_abs, max_iter, expansion):
    """Sum of log densities of ``x``; -inf if any point is unsupported."""
    x = np.asarray(x, dtype=float)
    z = (x - a) / b
    thr = thr_abs * np.maximum(1.0, np.abs(x)) / b
    w, status = invert(code, p, z, thr, max_iter, expansion)
    if np.any(status != OK):
        return -np.inf
    with np.errstate(divide="ignore", over="ignore"):
        d = dr0(code, p, w)
        ll = log_base_pdf(code, w) - np.log(b) - np.log(d)
    total = float(np.sum(ll))
    return total if np.isfinite(total) else -np.inf


def _log_integrand_mag(code, p, w):
    return log_abs_r0(code, p, w) + log_base_pdf(code, w)


def tail_cutoff(code, p, side):
    """Distance from 0 beyond which |r0 f_W| < exp(LOG_TAIL_CUT); nan if none."""
    ell = TAIL_START
    while ell <= TAIL_MAX:
        if _log_integrand_mag(code, p, side * ell) < LOG_TAIL_CUT:
            return ell
        ell *= TAIL_GROWTH
    return np.nan


def _lmom_integrand(code, p, w):
    """(..., 4) array of r0(w) P*_k(F(w)) f(w) for k = 0..3."""
    with np.errstate(over="ignore", under="ignore"):
        mag = np.exp(_log_integrand_mag(code, p, w))
    v = np.sign(w) * mag
    u = base_cdf(code, w)
    out = np.empty(w.shape + (4,))
    out[..., 0] = v
    out[..., 1] = v * (2.0 * u - 1.0)
    out[..., 2] = v * ((6.0 * u - 6.0) * u + 1.0)
    out[..., 3] = v * (((20.0 * u - 30.0) * u + 12.0) * u - 1.0)
    return out


def lmoment_integrals(code, p, atol, rtol):
    """First four L-moments of the unit transform by adaptive G7/K15.

    Returns ``(l, converged)``; ``l`` is nan when the tails do not decay.
    """
    left = tail_cutoff(code, p, -1.0)
    right = tail_cutoff(code, p, 1.0)
    if not (np.isfinite(left) and np.isfinite(right)):
        return np.full(4, np.nan), False
    total_width = left + right
    el = np.linspace(-left, 0.0, N_INITIAL + 1)
    er = np.linspace(0.0, right, N_INITIAL + 1)
    a = np.r_[el[:-1], er[:-1]]
    b = np.r_[el[1:], er[1:]]
    acc = np.zeros(4)
    converged = True
    for level in range(MAX_LEVELS):
        c = 0.5 * (a + b)
        hw = 0.5 * (b - a)
        nodes = c[:, None] + hw[:, None] * GK_NODES[None, :]
        vals = _lmom_integrand(code, p, nodes)
        kron = hw[:, None] * np.einsum("mjk,j->mk", vals, GK_WK)
        gauss = hw[:, None] * np.einsum("mjk,j->mk", vals, GK_WG)
        err = np.abs(kron - gauss).max(axis=1)
        est = acc + kron.sum(axis=0)
        scale = max(atol, rtol * np.abs(est).max())
        ok = err <= scale * (b - a) / total_width
        last = level == MAX_LEVELS - 1 or 2 * np.count_nonzero(~ok) > MAX_INTERVALS
        if last and not ok.all():
            converged = False
            ok[:] = True
        acc += kron[ok].sum(axis=0)
        if ok.all():
            break
        a_bad, b_bad = a[~ok], b[~ok]
        mid = 0.5 * (a_bad + b_bad)
        a = np.ravel(np.column_stack((a_bad, mid)))
        b = np.ravel(np.column_stack((mid, b_bad)))
    return acc, converged
