"""Limit law of the empirical trimmed distance and bounds derived from it.

sqrt(n)(d_n - d) converges to Z = max(max_{T1} B, max_{T2} -B,
max_{T3} (B(t) - B(s))/2) / (1 - alpha), with B a Brownian bridge and T1, T2,
T3 the contact sets of the optimal trimming.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ._kernels import K
from ._util import as_sample, check_alpha, check_prob
from .errors import DetectionError, InputError, ParameterError
from .special import kolmogorov_quantile, norm_cdf, norm_ppf
from .testing import plan_test
from .trimdist import trimmed_kd_sorted

_BLOCK = 1024  # replicates per RNG stream


@dataclass(frozen=True, eq=False)
class LimitLawSets:
    """Contact sets as arrays; ``t3`` has shape (k, 2) with rows (s, t), s <= t.

    ``degenerate_flags[i]`` is True when a point of the i-th set also meets the
    boundary condition that makes the limit law non-standard.
    """

    t1: np.ndarray = None
    t2: np.ndarray = None
    t3: np.ndarray = None
    degenerate_flags: tuple = (False, False, False)

    def __post_init__(self):
        for name in ("t1", "t2"):
            v = getattr(self, name)
            v = np.empty(0) if v is None else np.asarray(v, dtype=float).ravel()
            if np.any((v < 0.0) | (v > 1.0)):
                raise ParameterError(f"{name} points must lie in [0, 1]")
            object.__setattr__(self, name, v)
        v = np.empty((0, 2)) if self.t3 is None else np.asarray(self.t3, dtype=float).reshape(-1, 2)
        if np.any((v < 0.0) | (v > 1.0)) or np.any(v[:, 0] > v[:, 1]):
            raise ParameterError("t3 pairs must satisfy 0 <= s <= t <= 1")
        object.__setattr__(self, "t3", v)

    @property
    def empty(self):
        return self.t1.size == 0 and self.t2.size == 0 and self.t3.shape[0] == 0


@dataclass(frozen=True)
class ConfidenceInterval:
    lower: float
    upper: float
    level: float
    point_estimate: float


@dataclass(frozen=True)
class CredibilityBounds:
    """Bounds [l_delta, u_delta] for the credibility index N_delta.

    A bound whose numerator is not positive is reported as ``inf`` with the
    matching ``*_defined`` flag set to False. ``inside`` marks d <= 0.
    """

    l_delta: float
    u_delta: float
    delta: float
    lam: float
    rho: float
    d: float
    l_defined: bool = True
    u_defined: bool = True
    inside: bool = False


def gaussian_limit_sets(mu, sigma, alpha):
    """Contact sets for F0 = N(0,1) and F = N(mu, sigma^2) in the closed-form cases."""
    alpha = check_alpha(alpha)
    mu, sigma = float(mu), float(sigma)
    la = math.log1p(-alpha)
    if sigma == 1.0 and mu != 0.0:
        m = abs(mu)
        t0 = norm_cdf(-m / 2 + la / m)
        # a left shift mirrors the picture: lower contact at 1 - t0
        return LimitLawSets(t1=[t0]) if mu > 0 else LimitLawSets(t2=[1.0 - t0])
    if mu == 0.0 and 0.0 < sigma < 1.0:
        s2 = sigma * sigma
        delta = math.sqrt(8.0 * (s2 - 1.0) * math.log(sigma * (1.0 - alpha)))
        ta = norm_cdf(-delta / (2 * (1 - s2)))
        return LimitLawSets(t1=[ta], t2=[1.0 - ta])
    if mu == 0.0 and sigma > 1.0 / (1.0 - alpha):
        s2 = sigma * sigma
        delta = math.sqrt(8.0 * (s2 - 1.0) * math.log(sigma * (1.0 - alpha)))
        ta = norm_cdf(-delta / (2 * (s2 - 1)))
        return LimitLawSets(t3=[(ta, 1.0 - ta)])
    raise ParameterError(
        "closed-form contact sets need sigma == 1 with mu != 0, or mu == 0 with "
        "sigma < 1 or sigma > 1/(1-alpha); use numeric_limit_sets instead")


def _thin(idx, cap):
    if idx.size <= cap:
        return idx
    return idx[np.linspace(0, idx.size - 1, cap).round().astype(np.int64)]


def numeric_limit_sets(result, tol=1e-6, max_pairs_side=1000):
    """Contact sets read off a :class:`TrimmedDistanceResult` on a grid.

    Parameters
    ----------
    result : TrimmedDistanceResult
        From ``optimal_trim_envelope`` or ``theoretical_trimmed_result``.
    tol : float
        Slack for the defining equalities.
    max_pairs_side : int
        Candidate left and right endpoints for T3 are thinned to this many
        evenly spaced grid points before pairing.

    Raises
    ------
    DetectionError
        If the distance is within ``tol`` of 0 or no contact point is found.
    """
    if not tol > 0.0:
        raise ParameterError("tol must be positive")
    d = result.distance
    if d <= tol:
        raise DetectionError("distance is zero within tol; contact sets are not meaningful")
    al = result.alpha
    floor = -al / (1.0 - al)
    t, g = result.grid, result.g_values
    mid = 0.5 * (result.upper_env + result.lower_env)

    in1 = (np.abs(g - d) <= tol) & (mid >= -tol)
    in2 = (np.abs(floor - g - d) <= tol) & (mid <= floor + tol)
    flag1 = bool(np.any(in1 & (np.abs(mid) <= tol)))
    flag2 = bool(np.any(in2 & (np.abs(mid - floor) <= tol)))

    # G(t) - G(s) <= 2d for s <= t, so candidates sit near the envelopes
    left = np.flatnonzero(g <= result.upper_env - 2 * d + 2 * tol)
    right = np.flatnonzero(g >= result.lower_env + 2 * d - 2 * tol)
    left, right = _thin(left, max_pairs_side), _thin(right, max_pairs_side)
    pairs = np.empty((0, 2))
    flag3 = False
    if left.size and right.size:
        S, T = np.meshgrid(left, right, indexing="ij")
        gs, gt = g[S], g[T]
        avg = 0.5 * (gs + gt)
        ok = (S <= T) & (0.5 * (gt - gs) >= d - tol) & (avg >= floor - tol) & (avg <= tol)
        flag3 = bool(np.any(ok & ((np.abs(avg) <= tol) | (np.abs(avg - floor) <= tol))))
        pairs = np.column_stack((t[S[ok]], t[T[ok]]))

    sets = LimitLawSets(t[in1], t[in2], pairs, (flag1, flag2, flag3))
    if sets.empty:
        raise DetectionError(f"no contact points within tol={tol}; try a larger tol")
    return sets


def simulate_limit_law(sets, alpha, replicates, bridge_grid_size=4097, seed=0):
    """Draws of the limit variable Z.

    Set points are snapped to the nearest node of a uniform grid with
    ``bridge_grid_size`` points; the bridge is simulated exactly at the nodes
    used. Replicates are generated in blocks of 1024, each block with its own
    stream derived from ``(seed, block)``, so the output does not depend on how
    the work is split.
    """
    alpha = check_alpha(alpha)
    if sets.empty:
        raise InputError("all contact sets are empty")
    replicates = int(replicates)
    if replicates < 1:
        raise ParameterError("replicates must be at least 1")
    m = int(bridge_grid_size)
    if m < 2:
        raise ParameterError("bridge_grid_size must be at least 2")

    def snap(v):
        return np.rint(np.asarray(v, dtype=float) * (m - 1)).astype(np.int64)

    n1, n2 = np.unique(snap(sets.t1)), np.unique(snap(sets.t2))
    p3 = np.unique(snap(sets.t3), axis=0).reshape(-1, 2)
    nodes = np.unique(np.concatenate([n1, n2, p3.ravel()]))
    c1, c2 = np.searchsorted(nodes, n1), np.searchsorted(nodes, n2)
    cs, ct = np.searchsorted(nodes, p3[:, 0]), np.searchsorted(nodes, p3[:, 1])
    u = nodes / (m - 1.0)
    du = np.diff(np.concatenate(([0.0], u)))
    out = np.empty(replicates)
    for b, start in enumerate(range(0, replicates, _BLOCK)):
        r = min(_BLOCK, replicates - start)
        rng = np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(b,)))
        z = rng.standard_normal((_BLOCK, u.size + 1))[:r]
        w = np.cumsum(z[:, :-1] * np.sqrt(du), axis=1)
        w1 = w[:, -1] + z[:, -1] * math.sqrt(1.0 - u[-1]) if u.size else z[:, -1]
        bridge = np.ascontiguousarray(w - u[None, :] * w1[:, None])
        out[start:start + r] = K.limit_functional(bridge, c1, c2, cs, ct)
    return out / (1.0 - alpha)


def confidence_bounds(d_n, n, alpha, beta=0.05):
    """Conservative asymptotic (1 - beta) bounds for d_K(F0, R_alpha(F)).

    upper = d_n + Phi^{-1}(1-beta) / (2 sqrt(n) (1-alpha))
    lower = d_n - Psi^{-1}(1-beta) / (sqrt(n) (1-alpha)), Psi the Kolmogorov law.
    Both are clamped to [0, 1].
    """
    alpha = check_alpha(alpha)
    if not 0.0 < beta < 0.5:
        raise ParameterError("beta must lie in (0, 1/2)")
    if not 0.0 <= d_n <= 1.0:
        raise ParameterError("d_n must lie in [0, 1]")
    if n < 1:
        raise ParameterError("n must be at least 1")
    root = math.sqrt(n) * (1.0 - alpha)
    upper = d_n + norm_ppf(1.0 - beta) / (2.0 * root)
    lower = d_n - kolmogorov_quantile(1.0 - beta) / root
    return ConfidenceInterval(min(max(lower, 0.0), 1.0), min(max(upper, 0.0), 1.0),
                              float(beta), float(d_n))


def credibility_bounds(d, alpha, lam, rho, delta=0.5):
    """Bounds for the sample size at which the test rejects with probability delta.

    L = ((lam rho - Psi^{-1}(delta)/(1-alpha)) / d)^2 and
    U = ((lam rho - Phi^{-1}(delta)/(2(1-alpha))) / d)^2, where ``rho`` is the
    plan's separation at n = 1.
    """
    alpha = check_alpha(alpha)
    delta = check_prob(delta, "delta")
    lr = lam * rho
    if not d > 0.0:
        return CredibilityBounds(math.inf, math.inf, delta, lam, rho, float(d),
                                 False, False, inside=True)
    num_l = lr - kolmogorov_quantile(delta) / (1.0 - alpha)
    num_u = lr - norm_ppf(delta) / (2.0 * (1.0 - alpha))
    lo = (num_l / d) ** 2 if num_l > 0.0 else math.inf
    up = (num_u / d) ** 2 if num_u > 0.0 else math.inf
    return CredibilityBounds(lo, up, delta, lam, rho, float(d), num_l > 0.0, num_u > 0.0)


@dataclass
class SubsampleTrace:
    """Probed sizes and their rejection frequencies, in probe order."""

    sizes: list = field(default_factory=list)
    freqs: list = field(default_factory=list)


def subsample_credibility(sample, f0, alpha, eps1, eps2, delta=0.5, M=200, seed=0,
                          start=16, trace=None):
    """Subsampling estimate of the credibility index N_delta.

    The rejection frequency over ``M`` subsamples drawn without replacement is
    computed at sizes ``start, 2 start, 4 start, ...`` until it reaches
    ``delta``; the bracket is then bisected down to one observation. Each probed
    size ``m`` uses its own stream derived from ``(seed, m)``.

    Returns
    -------
    int or None
        Smallest probed size reaching ``delta``, or None when even the full
        sample is not rejected often enough.
    """
    alpha = check_alpha(alpha)
    delta = check_prob(delta, "delta")
    x = as_sample(sample)
    n = x.size
    if n < 50:
        raise InputError("subsampling needs at least 50 observations")
    if M < 100:
        raise ParameterError("M must be at least 100")
    y = np.asarray(f0.cdf(x), dtype=float)
    cache = {}

    def freq(m):
        if m not in cache:
            thr = plan_test(alpha, eps1, eps2, m).threshold
            if m == n:
                f = float(trimmed_kd_sorted(np.sort(y), alpha) > thr)
            else:
                rng = np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(m,)))
                hits = 0
                for _ in range(M):
                    sub = np.sort(y[rng.choice(n, m, replace=False)])
                    hits += trimmed_kd_sorted(sub, alpha) > thr
                f = hits / M
            cache[m] = f
            if trace is not None:
                trace.sizes.append(m)
                trace.freqs.append(f)
        return cache[m]

    lo, hi = 0, min(int(start), n)
    while freq(hi) < delta:
        if hi == n:
            return None
        lo, hi = hi, min(2 * hi, n)
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if freq(mid) >= delta:
            hi = mid
        else:
            lo = mid
    return hi
