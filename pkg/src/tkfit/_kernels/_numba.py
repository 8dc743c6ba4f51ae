"""numba implementations of the numeric kernels.

Every public function here has a twin with the same signature in
``_numpy.py``; the two are checked against each other in the test-suite.
Array arguments are 1-d float64 unless stated otherwise.
"""

import math

import numpy as np
from numba import njit

_SQRT2 = math.sqrt(2.0)
_SQRT2PI = math.sqrt(2.0 * math.pi)
_PI2 = math.pi * math.pi
_FPMIN = 1e-300


# ---------------------------------------------------------------------------
# scalar special functions
# ---------------------------------------------------------------------------


@njit(cache=True)
def _norm_cdf1(x):
    return 0.5 * math.erfc(-x / _SQRT2)


@njit(cache=True)
def _norm_ppf1(p):
    if p <= 0.0:
        return -np.inf
    if p >= 1.0:
        return np.inf
    q = p if p < 0.5 else 1.0 - p
    # Abramowitz & Stegun 26.2.23 as a starting point, then Newton on log(Phi)
    t = math.sqrt(-2.0 * math.log(q))
    x = -(t - (2.515517 + 0.802853 * t + 0.010328 * t * t)
          / (1.0 + 1.432788 * t + 0.189269 * t * t + 0.001308 * t * t * t))
    for _ in range(8):
        c = 0.5 * math.erfc(-x / _SQRT2)
        if c <= 0.0:
            break
        pdf = math.exp(-0.5 * x * x) / _SQRT2PI
        step = (math.log(c) - math.log(q)) * c / pdf
        x -= step
        if abs(step) <= 1e-15 * (1.0 + abs(x)):
            break
    return x if p < 0.5 else -x


@njit(cache=True)
def _kolmogorov_cdf1(x):
    if x <= 0.0:
        return 0.0
    if x < 0.5:
        w = _PI2 / (8.0 * x * x)
        s = 0.0
        for k in range(1, 100):
            j = 2 * k - 1
            term = math.exp(-j * j * w)
            s += term
            if term <= 1e-17 * s or term == 0.0:
                break
        return _SQRT2PI / x * s
    s = 0.0
    sign = 1.0
    for k in range(1, 200):
        term = math.exp(-2.0 * k * k * x * x)
        s += sign * term
        if term < 1e-18:
            break
        sign = -sign
    return 1.0 - 2.0 * s


@njit(cache=True)
def _kolmogorov_ppf1(p):
    lo = 0.0
    hi = 1.0
    while _kolmogorov_cdf1(hi) < p and hi < 64.0:
        lo = hi
        hi *= 2.0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if _kolmogorov_cdf1(mid) < p:
            lo = mid
        else:
            hi = mid
        if hi - lo <= 4.5e-16 * hi:
            break
    return 0.5 * (lo + hi)


@njit(cache=True)
def _betacf(a, b, x):
    # modified Lentz evaluation of the incomplete-beta continued fraction
    qab = a + b
    qap = a + 1.0
    qam = a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < _FPMIN:
        d = _FPMIN
    d = 1.0 / d
    h = d
    for m in range(1, 20000):
        m2 = 2.0 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        if abs(d) < _FPMIN:
            d = _FPMIN
        c = 1.0 + aa / c
        if abs(c) < _FPMIN:
            c = _FPMIN
        d = 1.0 / d
        h *= d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        if abs(d) < _FPMIN:
            d = _FPMIN
        c = 1.0 + aa / c
        if abs(c) < _FPMIN:
            c = _FPMIN
        d = 1.0 / d
        de = d * c
        h *= de
        if abs(de - 1.0) < 1e-16:
            break
    return h


@njit(cache=True)
def _betainc_pair(a, b, x):
    """Return (I_x(a, b), 1 - I_x(a, b)), each computed where it is accurate."""
    if x <= 0.0:
        return 0.0, 1.0
    if x >= 1.0:
        return 1.0, 0.0
    lbt = (math.lgamma(a + b) - math.lgamma(a) - math.lgamma(b)
           + a * math.log(x) + b * math.log1p(-x))
    bt = math.exp(lbt)
    if x < (a + 1.0) / (a + b + 2.0):
        v = bt * _betacf(a, b, x) / a
        return v, 1.0 - v
    w = bt * _betacf(b, a, 1.0 - x) / b
    return 1.0 - w, w


@njit(cache=True)
def _betaincinv1(a, b, p, upper):
    # bisection in x; `upper` selects the equation 1 - I_x(a, b) = p
    if p <= 0.0:
        return 1.0 if upper else 0.0
    if p >= 1.0:
        return 0.0 if upper else 1.0
    lo = 0.0
    hi = 1.0
    for _ in range(1100):
        mid = 0.5 * (lo + hi)
        low_tail, up_tail = _betainc_pair(a, b, mid)
        if upper:
            below = up_tail > p
        else:
            below = low_tail < p
        if below:
            lo = mid
        else:
            hi = mid
        if hi - lo <= 4.5e-16 * hi:  # relative (about 2 ulp): tail quantiles can be tiny
            break
    return 0.5 * (lo + hi)


# ---------------------------------------------------------------------------
# vectorised wrappers (1-d arrays in, 1-d arrays out)
# ---------------------------------------------------------------------------


@njit(cache=True)
def norm_cdf(x):
    out = np.empty(x.size)
    for i in range(x.size):
        out[i] = _norm_cdf1(x[i])
    return out


@njit(cache=True)
def norm_ppf(p):
    out = np.empty(p.size)
    for i in range(p.size):
        out[i] = _norm_ppf1(p[i])
    return out


@njit(cache=True)
def kolmogorov_cdf(x):
    out = np.empty(x.size)
    for i in range(x.size):
        out[i] = _kolmogorov_cdf1(x[i])
    return out


@njit(cache=True)
def kolmogorov_ppf(p):
    out = np.empty(p.size)
    for i in range(p.size):
        out[i] = _kolmogorov_ppf1(p[i])
    return out


@njit(cache=True)
def betainc(a, b, x):
    out = np.empty(x.size)
    for i in range(x.size):
        out[i] = _betainc_pair(a[i], b[i], x[i])[0]
    return out


@njit(cache=True)
def betaincc(a, b, x):
    out = np.empty(x.size)
    for i in range(x.size):
        out[i] = _betainc_pair(a[i], b[i], x[i])[1]
    return out


@njit(cache=True)
def betaincinv(a, b, p):
    out = np.empty(p.size)
    for i in range(p.size):
        if p[i] > 0.5:
            out[i] = _betaincinv1(a[i], b[i], 1.0 - p[i], True)
        else:
            out[i] = _betaincinv1(a[i], b[i], p[i], False)
    return out


@njit(cache=True)
def betainccinv(a, b, q):
    out = np.empty(q.size)
    for i in range(q.size):
        if q[i] > 0.5:
            out[i] = _betaincinv1(a[i], b[i], 1.0 - q[i], False)
        else:
            out[i] = _betaincinv1(a[i], b[i], q[i], True)
    return out


# ---------------------------------------------------------------------------
# trimmed Kolmogorov distance
# ---------------------------------------------------------------------------


@njit(cache=True)
def trimmed_kd_sorted(y, alpha):
    """Trimmed distance of the step quantile function of sorted ``y``.

    Returns ``(d, h, g_plus, g_minus, upper, lower)`` where ``h``, ``upper``
    and ``lower`` live on the nodes i/n (i = 0..n), ``g_plus[i] = G(i/n+)``
    and ``g_minus[i] = G((i+1)/n)``.
    """
    n = y.size
    scale = n * (1.0 - alpha)
    floor = -alpha / (1.0 - alpha)
    g_plus = np.empty(n)
    g_minus = np.empty(n)
    for i in range(n):
        g_plus[i] = y[i] - i / scale
        g_minus[i] = y[i] - (i + 1) / scale

    upper = np.empty(n + 1)
    upper[n] = g_minus[n - 1]
    run = -np.inf
    for i in range(n - 1, -1, -1):
        if g_plus[i] > run:
            run = g_plus[i]
        upper[i] = run

    lower = np.empty(n + 1)
    lower[0] = g_plus[0]
    run = np.inf
    for i in range(1, n + 1):
        if g_minus[i - 1] < run:
            run = g_minus[i - 1]
        lower[i] = run

    h = np.empty(n + 1)
    h[0] = 0.0
    h[n] = floor
    for i in range(1, n):
        mid = 0.5 * (upper[i] + lower[i])
        h[i] = min(max(mid, floor), 0.0)

    d = -np.inf
    for i in range(1, n + 1):
        a = g_plus[i - 1] - h[i - 1]
        b = h[i] - g_minus[i - 1]
        if a > d:
            d = a
        if b > d:
            d = b
    return d, h, g_plus, g_minus, upper, lower


@njit(cache=True)
def trimmed_kd_stat(y, alpha):
    """Distance only; avoids allocating the envelope arrays in Monte Carlo loops."""
    n = y.size
    scale = n * (1.0 - alpha)
    floor = -alpha / (1.0 - alpha)
    upper = np.empty(n + 1)
    run = -np.inf
    for i in range(n - 1, -1, -1):
        gp = y[i] - i / scale
        if gp > run:
            run = gp
        upper[i] = run
    d = y[0]  # i = 1, first term: g_{0+} - h_0
    low = np.inf
    h_prev = 0.0
    for i in range(1, n + 1):
        gm = y[i - 1] - i / scale
        if gm < low:
            low = gm
        if i < n:
            h = min(max(0.5 * (upper[i] + low), floor), 0.0)
        else:
            h = floor
        a = (y[i - 1] - (i - 1) / scale) - h_prev
        b = h - gm
        if a > d:
            d = a
        if b > d:
            d = b
        h_prev = h
    return d


@njit(cache=True)
def envelope(g):
    m = g.size
    upper = np.empty(m)
    lower = np.empty(m)
    run = -np.inf
    for i in range(m - 1, -1, -1):
        if g[i] > run:
            run = g[i]
        upper[i] = run
    run = np.inf
    for i in range(m):
        if g[i] < run:
            run = g[i]
        lower[i] = run
    return upper, lower


@njit(cache=True)
def _band_feasible(t, gamma, alpha, d):
    slope = 1.0 / (1.0 - alpha)
    slack = 1e-12
    if abs(gamma[0]) > d + slack:
        return False
    lo = 0.0
    hi = 0.0
    for k in range(1, t.size):
        reach = hi + (t[k] - t[k - 1]) * slope
        nlo = max(lo, gamma[k] - d, 0.0)
        nhi = min(reach, gamma[k] + d, 1.0)
        if nlo > nhi + slack:
            return False
        lo = nlo
        hi = max(nhi, nlo)
    return hi >= 1.0 - slack


@njit(cache=True)
def band_distance(t, gamma, alpha, tol):
    """Smallest d (to ``tol``) admitting h in C_alpha with |h - gamma| <= d on the grid."""
    lo = 0.0
    hi = 1.0
    if _band_feasible(t, gamma, alpha, 0.0):
        return 0.0
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if _band_feasible(t, gamma, alpha, mid):
            hi = mid
        else:
            lo = mid
    return hi


# ---------------------------------------------------------------------------
# Bonferroni/Kuiper scan and Brownian-bridge functional
# ---------------------------------------------------------------------------


@njit(cache=True)
def kuiper_min_ratio(y_ext, qk, kmax, min_prob):
    """min over 0 <= i < j <= n+1, j - i <= kmax of qk[j-i] / (y_ext[j] - y_ext[i])."""
    m = y_ext.size
    best = np.inf
    for k in range(1, kmax + 1):
        widest = 0.0
        for i in range(m - k):
            p = y_ext[i + k] - y_ext[i]
            if p > widest:
                widest = p
        if widest > min_prob:
            r = qk[k] / widest
            if r < best:
                best = r
    return best


@njit(cache=True)
def limit_functional(bridge, i1, i2, s3, t3):
    """Row-wise max(max B[i1], max -B[i2], max (B[t3] - B[s3]) / 2)."""
    reps = bridge.shape[0]
    out = np.empty(reps)
    for r in range(reps):
        z = -np.inf
        for k in range(i1.size):
            v = bridge[r, i1[k]]
            if v > z:
                z = v
        for k in range(i2.size):
            v = -bridge[r, i2[k]]
            if v > z:
                z = v
        for k in range(s3.size):
            v = 0.5 * (bridge[r, t3[k]] - bridge[r, s3[k]])
            if v > z:
                z = v
        out[r] = z
    return out
