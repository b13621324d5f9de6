"""Constants shared by the numpy and numba kernel implementations.

Every family is reduced to an integer *code* plus a flat float64 parameter
vector ``p`` describing the unit transform ``r0`` (location 0, scale 1):

====  =================  ==========================================
code  transform          ``p``
====  =================  ==========================================
0     g-and-h            ``[g, h, ng, nh, g_1..g_ng, h_1..h_nh]``
1     generalized g-h    ``[g, h, c]``
2     g-and-k            ``[g, k, c]``
3     g-and-j            ``[g, c]``
4     double h-h         ``[h_left, h_right]``
5     superclass h-j-k   ``[alpha, beta, gamma]``
6     logistic g-k       ``[gamma, kappa]``
7     logistic k-k       ``[kappa_left, kappa_right]``
====  =================  ==========================================

Codes 6 and 7 use the standard logistic base, all others the standard
normal.  The g, h and g-and-h families share code 0.
"""
import math

import numpy as np

GH, GGH, GK, GJ, HH, HJK, LGK, LKK = range(8)
LOGISTIC_CODES = (LGK, LKK)

# |g| below this uses the exact g -> 0 limit of (exp(g w) - 1) / g
G_EPS = 1e-10

LOG_SQRT_2PI = 0.5 * math.log(2.0 * math.pi)
SQRT_HALF = math.sqrt(0.5)

# inversion status codes
OK, BELOW_SUPPORT, ABOVE_SUPPORT, NO_CONVERGENCE = 0, 1, 2, 3

# quadrature: integrand magnitude (log) at which the tails are cut
LOG_TAIL_CUT = -40.0
TAIL_START = 8.0
TAIL_GROWTH = 1.5
TAIL_MAX = 1e4
N_INITIAL = 8
MAX_LEVELS = 45
MAX_INTERVALS = 4096

# Gauss-Kronrod 7/15 rule on [-1, 1]
_XGK = (0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
        0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
        0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
        0.207784955007898467600689403773245, 0.0)
_WGK = (0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
        0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
        0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
        0.204432940075298892414161999234649, 0.209482141084727828012999174891714)
_WG = (0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
       0.381830050505118944950369775488975, 0.417959183673469387755102040816327)


def _build_rule():
    nodes = np.empty(15)
    wk = np.empty(15)
    wg = np.zeros(15)
    for j in range(7):
        nodes[j] = -_XGK[j]
        nodes[14 - j] = _XGK[j]
        wk[j] = wk[14 - j] = _WGK[j]
    nodes[7] = 0.0
    wk[7] = _WGK[7]
    for j, idx in enumerate((1, 3, 5)):
        wg[idx] = wg[14 - idx] = _WG[j]
    wg[7] = _WG[3]
    return nodes, wk, wg


GK_NODES, GK_WK, GK_WG = _build_rule()
