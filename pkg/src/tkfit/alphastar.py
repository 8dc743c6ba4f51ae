"""Estimating the contamination level.

* ``tk_index``: the tK-index of fit alpha*_n, the smallest alpha with
  (1 - alpha) d_K(F0, R_alpha(F_n)) <= sqrt(log(2/eps1) / (2n)).
* ``kuiper_lower_bound``: a simultaneous Beta-quantile lower confidence bound
  over all order-statistic intervals.
* ``normal_tolerance_region``: normal laws that are alpha-contaminations of a
  normal model, on a parameter grid.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._kernels import K
from ._util import as_sample, bisect_decreasing, check_alpha, check_prob
from .errors import InputError, ParameterError
from .special import beta_isf, norm_cdf, norm_ppf
from .trimdist import optimal_trim_envelope, trimmed_kd_sorted

_ALPHA_TOL = 1e-5
_ALPHA_MAX = 1.0 - 1e-6


@dataclass(frozen=True)
class AlphaStarResult:
    alpha_star: float
    threshold: float
    d_untrimmed: float
    bracket: tuple


def tk_threshold(n, eps1):
    return math.sqrt(math.log(2.0 / eps1) / (2.0 * n))


def tk_index(sample, f0, eps1=0.05, tol=_ALPHA_TOL):
    """tK-index of fit alpha*_n.

    ``g(alpha) = (1 - alpha) d_n(alpha) - threshold`` is nonincreasing, so the
    first crossing is found by bisection on [0, 1 - 1e-6]. The returned value is
    the lower edge of the final bracket.
    """
    eps1 = check_prob(eps1, "eps1")
    y = np.sort(np.asarray(f0.cdf(as_sample(sample)), dtype=float))
    thr = tk_threshold(y.size, eps1)
    d0 = trimmed_kd_sorted(y, 0.0)
    if thr >= d0:
        return AlphaStarResult(0.0, thr, d0, (0.0, 0.0))

    def g(a):
        return (1.0 - a) * trimmed_kd_sorted(y, a) - thr

    lo, hi = bisect_decreasing(g, 0.0, _ALPHA_MAX, tol)
    return AlphaStarResult(lo, thr, d0, (lo, hi))


def kuiper_pair_count(n, restrict=False):
    """Number of index pairs scanned: all with j - i <= n, or j - i <= floor(n/2)."""
    if not restrict:
        return n * (n + 3) // 2
    d = n // 2
    return ((2 * n + 3) * d - d * d) // 2


def kuiper_lower_bound(sample, f0, gamma=0.05, restrict=False, min_prob=1e-12):
    """Bonferroni lower confidence bound for the contamination level.

    For each spacing k = j - i, the bound uses the (1 - gamma/M_n) quantile of
    Beta(k, n + 1 - k) divided by the widest F0-probability of
    [X_(i), X_(j)], with X_(0) = -inf and X_(n+1) = +inf. Intervals with
    probability below ``min_prob`` are skipped.

    Parameters
    ----------
    restrict : bool
        Only scan spacings k <= floor(n/2) (with the matching smaller M_n).

    Returns
    -------
    float
        ``max(0, 1 - min ratio)``.
    """
    gamma = check_prob(gamma, "gamma")
    y = np.sort(np.asarray(f0.cdf(as_sample(sample)), dtype=float))
    n = y.size
    if n > 100_000:
        raise InputError("kuiper_lower_bound scans O(n^2) pairs; n is capped at 100000")
    kmax = n // 2 if restrict else n
    if kmax < 1:
        raise InputError("not enough observations for the restricted scan")
    mn = kuiper_pair_count(n, restrict)
    k = np.arange(1, kmax + 1, dtype=float)
    qk = np.empty(kmax + 1)
    qk[0] = np.nan
    # upper quantile of Beta(k, n+1-k) = 1 - lower quantile of Beta(n+1-k, k)
    qk[1:] = beta_isf(np.full(kmax, gamma / mn), k, n + 1.0 - k)
    y_ext = np.concatenate(([0.0], y, [1.0]))
    best = K.kuiper_min_ratio(y_ext, qk, kmax, float(min_prob))
    return max(0.0, 1.0 - best) if math.isfinite(best) else 0.0


@dataclass(frozen=True, eq=False)
class ToleranceRegion:
    """Membership of N(mu, sigma^2) candidates in the contamination neighbourhood.

    ``membership[i, j]`` refers to ``(mu_grid[i], sigma_grid[j])``. ``boundary``
    is a closed polygon (k, 2) running along the lowest member sigma for each
    mu, then back along the highest.
    """

    alpha: float
    f0_params: tuple
    mu_grid: np.ndarray
    sigma_grid: np.ndarray
    distances: np.ndarray
    membership: np.ndarray
    tol: float
    boundary: np.ndarray


def _gauss_gamma(z, mu, sigma):
    # Gamma(t) = Phi(mu + sigma Phi^{-1}(t)) with exact limits at 0 and 1
    return np.concatenate(([0.0], norm_cdf(mu + sigma * z), [1.0]))


def normal_tolerance_region(f0_mu, f0_sigma, alpha, mu_grid, sigma_grid, tol=None,
                            grid_size=10_000, clip_epsilon=1e-6):
    """Scan a (mu, sigma) grid for normal laws F with d_K(F0, R_alpha(F)) <= tol.

    F0 = N(f0_mu, f0_sigma^2) is the model and each grid point a candidate F.
    The default ``tol`` is ``2 / grid_size``.
    """
    alpha = check_alpha(alpha)
    if not f0_sigma > 0.0:
        raise ParameterError("f0_sigma must be positive")
    mu_grid = np.asarray(mu_grid, dtype=float).ravel()
    sigma_grid = np.asarray(sigma_grid, dtype=float).ravel()
    if mu_grid.size == 0 or sigma_grid.size == 0:
        raise InputError("parameter grids must be nonempty")
    if np.any(sigma_grid <= 0.0):
        raise ParameterError("sigma grid values must be positive")
    tol = 2.0 / grid_size if tol is None else float(tol)
    if not tol > 0.0:
        raise ParameterError("tol must be positive")
    t = np.linspace(clip_epsilon, 1.0 - clip_epsilon, int(grid_size))
    grid = np.concatenate(([0.0], t, [1.0]))
    z = norm_ppf(t)
    dist = np.empty((mu_grid.size, sigma_grid.size))
    for i, m in enumerate(mu_grid):
        for j, s in enumerate(sigma_grid):
            # standardise by the model: F0 -> N(0,1), F -> N(mu', sigma')
            mu_s, sig_s = (m - f0_mu) / f0_sigma, s / f0_sigma
            gamma = _gauss_gamma(z, mu_s, sig_s)
            dist[i, j] = optimal_trim_envelope(np.maximum.accumulate(gamma), alpha, grid).distance
    member = dist <= tol
    lower, upper = [], []
    for i, m in enumerate(mu_grid):
        js = np.flatnonzero(member[i])
        if js.size:
            lower.append((m, sigma_grid[js[0]]))
            upper.append((m, sigma_grid[js[-1]]))
    poly = np.array(lower + upper[::-1]) if lower else np.empty((0, 2))
    return ToleranceRegion(alpha, (float(f0_mu), float(f0_sigma)), mu_grid, sigma_grid,
                           dist, member, tol, poly)
