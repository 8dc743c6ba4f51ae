"""Pure-numpy implementations of the numeric kernels (no numba).

Same signatures and conventions as ``_numba.py``. Scalar ``math.erfc`` and
``math.lgamma`` are lifted with ``np.frompyfunc`` since numpy has no
native versions.
"""

import math

import numpy as np

_SQRT2 = math.sqrt(2.0)
_SQRT2PI = math.sqrt(2.0 * math.pi)
_PI2 = math.pi * math.pi
_FPMIN = 1e-300

_erfc = np.frompyfunc(math.erfc, 1, 1)
_lgamma = np.frompyfunc(math.lgamma, 1, 1)


def _f(x):
    return np.asarray(x, dtype=float)


def norm_cdf(x):
    return 0.5 * _f(_erfc(-x / _SQRT2))


def norm_ppf(p):
    p = _f(p)
    out = np.empty_like(p)
    out[p <= 0.0] = -np.inf
    out[p >= 1.0] = np.inf
    inner = (p > 0.0) & (p < 1.0)
    pp = p[inner]
    q = np.where(pp < 0.5, pp, 1.0 - pp)
    t = np.sqrt(-2.0 * np.log(q))
    x = -(t - (2.515517 + 0.802853 * t + 0.010328 * t * t)
          / (1.0 + 1.432788 * t + 0.189269 * t * t + 0.001308 * t * t * t))
    for _ in range(8):
        c = norm_cdf(x)
        pdf = np.exp(-0.5 * x * x) / _SQRT2PI
        with np.errstate(divide="ignore", invalid="ignore"):
            step = (np.log(c) - np.log(q)) * c / pdf
        step = np.where(c > 0.0, step, 0.0)
        x = x - step
        if np.all(np.abs(step) <= 1e-15 * (1.0 + np.abs(x))):
            break
    out[inner] = np.where(pp < 0.5, x, -x)
    return out


def kolmogorov_cdf(x):
    x = _f(x)
    out = np.zeros_like(x)
    small = (x > 0.0) & (x < 0.5)
    big = x >= 0.5
    if small.any():
        xs = x[small]
        j = (2.0 * np.arange(1, 12) - 1.0)[:, None]
        terms = np.exp(-j * j * _PI2 / (8.0 * xs * xs))
        out[small] = _SQRT2PI / xs * terms.sum(axis=0)
    if big.any():
        xb = x[big]
        k = np.arange(1, 40, dtype=float)[:, None]
        sign = np.where(k % 2 == 1, 1.0, -1.0)
        terms = sign * np.exp(-2.0 * k * k * xb * xb)
        out[big] = 1.0 - 2.0 * terms.sum(axis=0)
    return out


def kolmogorov_ppf(p):
    p = _f(p)
    lo = np.zeros_like(p)
    hi = np.full_like(p, 8.0)
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        below = kolmogorov_cdf(mid) < p
        lo = np.where(below, mid, lo)
        hi = np.where(below, hi, mid)
        if np.all(hi - lo <= 4.5e-16 * hi):
            break
    return 0.5 * (lo + hi)


def _betacf(a, b, x):
    qab = a + b
    qap = a + 1.0
    qam = a - 1.0
    c = np.ones_like(x)
    d = 1.0 - qab * x / qap
    d = np.where(np.abs(d) < _FPMIN, _FPMIN, d)
    d = 1.0 / d
    h = d.copy()
    active = np.ones(x.shape, dtype=bool)
    for m in range(1, 20000):
        m2 = 2.0 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        d = np.where(np.abs(d) < _FPMIN, _FPMIN, d)
        c = 1.0 + aa / c
        c = np.where(np.abs(c) < _FPMIN, _FPMIN, c)
        d = 1.0 / d
        h = np.where(active, h * d * c, h)
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        d = np.where(np.abs(d) < _FPMIN, _FPMIN, d)
        c = 1.0 + aa / c
        c = np.where(np.abs(c) < _FPMIN, _FPMIN, c)
        d = 1.0 / d
        de = d * c
        h = np.where(active, h * de, h)
        active &= np.abs(de - 1.0) >= 1e-16
        if not active.any():
            break
    return h


def _betainc_pair(a, b, x):
    a, b, x = np.broadcast_arrays(_f(a), _f(b), _f(x))
    low = np.where(x >= 1.0, 1.0, 0.0)
    up = 1.0 - low
    inner = (x > 0.0) & (x < 1.0)
    if inner.any():
        ai, bi, xi = a[inner], b[inner], x[inner]
        lbt = (_f(_lgamma(ai + bi)) - _f(_lgamma(ai)) - _f(_lgamma(bi))
               + ai * np.log(xi) + bi * np.log1p(-xi))
        bt = np.exp(lbt)
        direct = xi < (ai + 1.0) / (ai + bi + 2.0)
        # evaluate each branch only where it is used
        v = np.empty_like(xi)
        w = np.empty_like(xi)
        if direct.any():
            v[direct] = bt[direct] * _betacf(ai[direct], bi[direct], xi[direct]) / ai[direct]
            w[direct] = 1.0 - v[direct]
        flip = ~direct
        if flip.any():
            w[flip] = bt[flip] * _betacf(bi[flip], ai[flip], 1.0 - xi[flip]) / bi[flip]
            v[flip] = 1.0 - w[flip]
        low[inner] = v
        up[inner] = w
    return low, up


def betainc(a, b, x):
    return _betainc_pair(a, b, x)[0]


def betaincc(a, b, x):
    return _betainc_pair(a, b, x)[1]


def _bisect_beta(a, b, p, upper):
    lo = np.zeros_like(p)
    hi = np.ones_like(p)
    # relative width stop: tail quantiles can be far below 1e-16
    for _ in range(1100):
        mid = 0.5 * (lo + hi)
        low_tail, up_tail = _betainc_pair(a, b, mid)
        below = (up_tail > p) if upper else (low_tail < p)
        lo = np.where(below, mid, lo)
        hi = np.where(below, hi, mid)
        if np.all(hi - lo <= 4.5e-16 * hi):
            break
    x = 0.5 * (lo + hi)
    if upper:
        x = np.where(p <= 0.0, 1.0, np.where(p >= 1.0, 0.0, x))
    else:
        x = np.where(p <= 0.0, 0.0, np.where(p >= 1.0, 1.0, x))
    return x


def betaincinv(a, b, p):
    a, b, p = np.broadcast_arrays(_f(a), _f(b), _f(p))
    hi_side = p > 0.5
    return np.where(hi_side,
                    _bisect_beta(a, b, np.where(hi_side, 1.0 - p, 0.5), True),
                    _bisect_beta(a, b, np.where(hi_side, 0.5, p), False))


def betainccinv(a, b, q):
    a, b, q = np.broadcast_arrays(_f(a), _f(b), _f(q))
    hi_side = q > 0.5
    return np.where(hi_side,
                    _bisect_beta(a, b, np.where(hi_side, 1.0 - q, 0.5), False),
                    _bisect_beta(a, b, np.where(hi_side, 0.5, q), True))


def trimmed_kd_sorted(y, alpha):
    n = y.size
    scale = n * (1.0 - alpha)
    floor = -alpha / (1.0 - alpha)
    i = np.arange(n)
    g_plus = y - i / scale
    g_minus = y - (i + 1) / scale
    upper = np.empty(n + 1)
    upper[:n] = np.maximum.accumulate(g_plus[::-1])[::-1]
    upper[n] = g_minus[-1]
    lower = np.empty(n + 1)
    lower[0] = g_plus[0]
    lower[1:] = np.minimum.accumulate(g_minus)
    h = np.minimum(np.maximum(0.5 * (upper + lower), floor), 0.0)
    h[0] = 0.0
    h[n] = floor
    d = max((g_plus - h[:-1]).max(), (h[1:] - g_minus).max())
    return d, h, g_plus, g_minus, upper, lower


def trimmed_kd_stat(y, alpha):
    return trimmed_kd_sorted(y, alpha)[0]


def envelope(g):
    upper = np.maximum.accumulate(g[::-1])[::-1]
    lower = np.minimum.accumulate(g)
    return upper, lower


def _band_feasible_many(t, gamma, alpha, ds):
    slope = 1.0 / (1.0 - alpha)
    slack = 1e-12
    ok = np.abs(gamma[0]) <= ds + slack
    lo = np.zeros_like(ds)
    hi = np.zeros_like(ds)
    dt = np.diff(t) * slope
    for k in range(1, t.size):
        nlo = np.maximum(np.maximum(lo, gamma[k] - ds), 0.0)
        nhi = np.minimum(np.minimum(hi + dt[k - 1], gamma[k] + ds), 1.0)
        ok &= nlo <= nhi + slack
        lo = nlo
        hi = np.maximum(nhi, nlo)
    return ok & (hi >= 1.0 - slack)


def band_distance(t, gamma, alpha, tol):
    # multisection: 31 candidate levels per sweep over the grid
    if _band_feasible_many(t, gamma, alpha, np.zeros(1))[0]:
        return 0.0
    lo, hi = 0.0, 1.0
    while hi - lo > tol:
        ds = np.linspace(lo, hi, 33)[1:-1]
        ok = _band_feasible_many(t, gamma, alpha, ds)
        if ok.any():
            first = int(np.argmax(ok))
            hi = ds[first]
            lo = ds[first - 1] if first > 0 else lo
        else:
            lo = ds[-1]
    return hi


def kuiper_min_ratio(y_ext, qk, kmax, min_prob):
    best = np.inf
    for k in range(1, kmax + 1):
        widest = (y_ext[k:] - y_ext[:-k]).max()
        if widest > min_prob:
            best = min(best, qk[k] / widest)
    return best


def limit_functional(bridge, i1, i2, s3, t3):
    z = np.full(bridge.shape[0], -np.inf)
    if i1.size:
        z = np.maximum(z, bridge[:, i1].max(axis=1))
    if i2.size:
        z = np.maximum(z, (-bridge[:, i2]).max(axis=1))
    step = 4096
    for start in range(0, s3.size, step):
        s, t = s3[start:start + step], t3[start:start + step]
        z = np.maximum(z, (0.5 * (bridge[:, t] - bridge[:, s])).max(axis=1))
    return z
