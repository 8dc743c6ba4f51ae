"""Trimmed Kolmogorov distance d_K(F0, R_alpha(F)).

Notation. ``Gamma = F0 o F^{-1}`` on [0, 1] and ``G(t) = Gamma(t) - t/(1-alpha)``.
A trimming of F is ``h o F`` with h in C_alpha (h(0)=0, h(1)=1, slopes in
[0, 1/(1-alpha)]); writing ``h~(t) = h(t) - t/(1-alpha)`` the distance is
``min ||h~ - G||``. The minimiser is the clamped midline of the envelopes
``U(t) = sup_{s>=t} G(s)`` and ``L(t) = inf_{s<=t} G(s)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._kernels import K
from ._util import as_sample, check_alpha
from .distributions import Beta, Normal, PiecewiseLinearCdf, QuantileSpec, Uniform
from .errors import InputError, ModelError, ParameterError
from .special import norm_cdf

_MONO_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class TrimmedDistanceResult:
    """Distance plus the optimal trimming on a grid.

    Attributes
    ----------
    distance : float
        d_K(F0, R_alpha(F)), clamped to [0, 1].
    alpha : float
    grid : ndarray
        Nodes in [0, 1] including both endpoints.
    h_tilde : ndarray
        Optimal ``h~`` at the nodes; values in [-alpha/(1-alpha), 0].
    upper_env, lower_env : ndarray
        Envelopes U and L at the nodes.
    g_values : ndarray
        G at the nodes (left limits for a sample).
    g_right : ndarray or None
        Right limits G(t+) for a sample, where G jumps at every node.
    """

    distance: float
    alpha: float
    grid: np.ndarray
    h_tilde: np.ndarray
    upper_env: np.ndarray
    lower_env: np.ndarray
    g_values: np.ndarray
    g_right: np.ndarray | None = None

    def h_alpha(self):
        """The trimming function h = h~ + t/(1-alpha) on ``grid``."""
        return self.h_tilde + self.grid / (1.0 - self.alpha)


def empirical_trimmed_kd(sample, f0, alpha):
    """d_K(F0, R_alpha(F_n)) for the empirical law of ``sample``.

    Parameters
    ----------
    sample : array_like
        Observations; ties are processed as they come.
    f0 : DistributionModel
        Continuous model.
    alpha : float
        Trimming level in [0, 1).

    Returns
    -------
    TrimmedDistanceResult
        On the grid i/n. ``g_values[i] = G(i/n)`` and ``g_right[i] = G(i/n+)``.
    """
    alpha = check_alpha(alpha)
    y = np.sort(np.asarray(f0.cdf(as_sample(sample)), dtype=float).ravel())
    return _empirical_from_sorted(y, alpha)


def _empirical_from_sorted(y, alpha):
    n = y.size
    d, h, g_plus, g_minus, upper, lower = K.trimmed_kd_sorted(y, alpha)
    g_left = np.empty(n + 1)
    g_left[0] = 0.0
    g_left[1:] = g_minus
    g_right = np.empty(n + 1)
    g_right[:n] = g_plus
    g_right[n] = g_minus[-1]
    return TrimmedDistanceResult(
        distance=float(min(max(d, 0.0), 1.0)),
        alpha=alpha,
        grid=np.arange(n + 1) / n,
        h_tilde=h,
        upper_env=upper,
        lower_env=lower,
        g_values=g_left,
        g_right=g_right,
    )


def trimmed_kd_sorted(y, alpha):
    """Distance only, for sorted F0-transformed data ``y``. Monte Carlo fast path."""
    y = np.ascontiguousarray(y, dtype=float)
    if y.size == 0:
        raise InputError("sample is empty")
    return float(min(max(K.trimmed_kd_stat(y, float(alpha)), 0.0), 1.0))


def _check_gamma(gamma, grid):
    gamma = np.ascontiguousarray(gamma, dtype=float).ravel()
    if gamma.size < 2:
        raise InputError("gamma needs at least two grid points")
    if grid is None:
        grid = np.linspace(0.0, 1.0, gamma.size)
    grid = np.ascontiguousarray(grid, dtype=float).ravel()
    if grid.size != gamma.size:
        raise InputError("grid and gamma differ in length")
    if grid[0] != 0.0 or grid[-1] != 1.0 or np.any(np.diff(grid) <= 0.0):
        raise InputError("grid must increase strictly from 0 to 1")
    if not np.all(np.isfinite(gamma)):
        raise InputError("gamma has non-finite values")
    if np.any(np.diff(gamma) < -_MONO_TOL):
        raise InputError("gamma is not nondecreasing")
    if gamma.min() < -_MONO_TOL or gamma.max() > 1.0 + _MONO_TOL:
        raise InputError("gamma must take values in [0, 1]")
    return np.clip(gamma, 0.0, 1.0), grid


def optimal_trim_envelope(gamma, alpha, grid=None):
    """Optimal trimming for a grid function ``gamma`` = F0 o F^{-1}.

    Parameters
    ----------
    gamma : array_like
        Nondecreasing values in [0, 1] on ``grid``.
    alpha : float
    grid : array_like, optional
        Strictly increasing nodes from 0 to 1; uniform by default.

    Returns
    -------
    TrimmedDistanceResult
    """
    alpha = check_alpha(alpha)
    gamma, grid = _check_gamma(gamma, grid)
    g = gamma - grid / (1.0 - alpha)
    upper, lower = K.envelope(g)
    h = np.clip(0.5 * (upper + lower), -alpha / (1.0 - alpha), 0.0)
    d = float(np.max(np.abs(h - g)))
    return TrimmedDistanceResult(min(d, 1.0), alpha, grid, h, upper, lower, g)


def induced_gamma(f0, f, grid_size=100_000, clip=None):
    """``(grid, Gamma)`` with Gamma = F0 o F^{-1} on a clipped uniform grid.

    The endpoints 0 and 1 carry the limits F0(inf supp F) and F0(sup supp F).
    """
    if grid_size < 2:
        raise ParameterError("grid_size must be at least 2")
    clip = clip or QuantileSpec()
    eps = clip.clip_epsilon
    t = np.linspace(eps, 1.0 - eps, int(grid_size))
    q = np.asarray(f.quantile(t), dtype=float)
    if np.any(np.diff(q) <= 0.0):
        raise ModelError("F must be continuous and strictly increasing on its support "
                         "(its quantile function has flat spans)")
    lo, hi = f.support()
    grid = np.concatenate(([0.0], t, [1.0]))
    gamma = np.concatenate(([f0.cdf(lo)], np.asarray(f0.cdf(q)), [f0.cdf(hi)]))
    return grid, np.maximum.accumulate(np.clip(gamma, 0.0, 1.0))


def theoretical_trimmed_result(f0, f, alpha, grid_size=100_000, clip=None):
    """Grid evaluation of d_K(F0, R_alpha(F)); returns the full result."""
    alpha = check_alpha(alpha)
    grid, gamma = induced_gamma(f0, f, grid_size, clip)
    return optimal_trim_envelope(gamma, alpha, grid)


def theoretical_trimmed_kd(f0, f, alpha, grid_size=100_000, clip=None):
    """d_K(F0, R_alpha(F)) for two laws, by the envelope solver on a grid.

    ``F`` must be continuous and strictly increasing on its support.
    """
    return theoretical_trimmed_result(f0, f, alpha, grid_size, clip).distance


def gaussian_trimmed_kd(mu, sigma, alpha):
    """d_K(N(0,1), R_alpha(N(mu, sigma^2))).

    Closed form when ``sigma == 1`` or ``mu == 0``; otherwise the grid solver.
    """
    alpha = check_alpha(alpha)
    mu, sigma = float(mu), float(sigma)
    if not sigma > 0.0:
        raise ParameterError("sigma must be positive")
    la = math.log1p(-alpha)
    if sigma == 1.0:
        if mu == 0.0:
            return 0.0
        m = abs(mu)
        d = norm_cdf(m / 2 + la / m) - norm_cdf(-m / 2 + la / m) / (1.0 - alpha)
        return min(max(d, 0.0), 1.0)
    if mu == 0.0:
        if 1.0 <= sigma <= 1.0 / (1.0 - alpha):
            return 0.0
        s2 = sigma * sigma
        delta = math.sqrt(8.0 * (s2 - 1.0) * math.log(sigma * (1.0 - alpha)))
        if sigma < 1.0:
            d = norm_cdf(-sigma * delta / 2 / (1 - s2)) - norm_cdf(-delta / 2 / (1 - s2)) / (1 - alpha)
        else:
            d = (norm_cdf(sigma * delta / 2 / (s2 - 1))
                 - (norm_cdf(delta / 2 / (s2 - 1)) - alpha / 2) / (1 - alpha))
        return min(max(d, 0.0), 1.0)
    return theoretical_trimmed_kd(Normal(0.0, 1.0), Normal(mu, sigma), alpha)


def brute_force_trimmed_kd(gamma, alpha, tol=1e-6, grid=None):
    """Independent oracle: bisection on d with a forward feasibility sweep.

    For a trial level d, the set of values h(t_k) reachable by a function with
    h(0)=0, slopes in [0, 1/(1-alpha)] and |h - Gamma| <= d at all earlier nodes
    is an interval; d is feasible when the sweep reaches h(1) = 1.
    """
    alpha = check_alpha(alpha)
    if not tol > 0.0:
        raise ParameterError("tol must be positive")
    gamma, grid = _check_gamma(gamma, grid)
    return float(K.band_distance(grid, gamma, alpha, float(tol)))


def step_gamma(y, eta=1e-9):
    """Grid version of the step function F0 o F_n^{-1} for sorted ``y = F0(X_(i))``.

    Each jump at i/n becomes a ramp of width ``eta``.
    """
    y = np.asarray(y, dtype=float)
    n = y.size
    if not 0.0 < eta < 1.0 / (2 * n):
        raise ParameterError("eta must be below half the grid spacing")
    nodes = np.arange(n + 1) / n
    grid = np.empty(2 * n + 1)
    gamma = np.empty(2 * n + 1)
    grid[0::2] = nodes
    grid[1::2] = nodes[:-1] + eta
    gamma[0] = 0.0
    gamma[2::2] = y
    gamma[1::2] = y
    return grid, gamma


# ---------------------------------------------------------------------------
# extreme cases for coverage studies
# ---------------------------------------------------------------------------

_BETA_ALPHA_MAX = 1.0 - math.e * math.log(2.0) / 2.0
_RAMP = 1e-9


def beta_extreme_shape(alpha):
    """Larger root of ``b * 2**(1 - b) = 1/(1 - alpha)``, i.e. Beta(1, b) has density 1/(1-alpha) at 1/2."""
    alpha = check_alpha(alpha)
    if not alpha < _BETA_ALPHA_MAX:
        raise ParameterError(f"BetaExtreme needs alpha < {_BETA_ALPHA_MAX:.6f}")
    target = -math.log1p(-alpha)

    def f(b):  # log(b 2^{1-b}) - log(1/(1-alpha)), decreasing beyond 1/ln 2
        return math.log(b) + (1.0 - b) * math.log(2.0) - target

    lo, hi = 1.0 / math.log(2.0), 2.0
    while f(hi) > 0.0:
        hi *= 2.0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if f(mid) > 0.0:
            lo = mid
        else:
            hi = mid
        if hi - lo < 1e-15:
            break
    return 0.5 * (lo + hi)


@dataclass(frozen=True)
class ExtremeCaseModel:
    """Target laws whose trimmed distance to U(0,1) is known in closed form.

    Build with :meth:`piecewise_ab`, :meth:`half_kink` or :meth:`beta_extreme`.
    """

    kind: str
    alpha: float
    a: float = 0.0
    b: float = 0.0
    q: float = 0.0
    d_alpha: float = 0.0
    beta0: float = 0.0

    @classmethod
    def piecewise_ab(cls, a, b, q, alpha):
        alpha = check_alpha(alpha)
        if not 0.0 <= a <= b <= 1.0:
            raise ParameterError("need 0 <= a <= b <= 1")
        if not 0.0 < q < 1.0:
            raise ParameterError("q must lie in (0, 1)")
        d = (2.0 + q) * alpha / (2.0 * (1.0 - alpha))
        if not d < 1.0:
            raise ParameterError("d_alpha = (2+q)alpha/(2(1-alpha)) must be below 1")
        m = cls("piecewise_ab", alpha, a=float(a), b=float(b), q=float(q), d_alpha=d)
        t0, t1, t2, t3 = m.knots
        mid = 0.5 * (a + b)
        if not (t0 < t1 < mid - _RAMP and mid + _RAMP < t2 < t3):
            raise ParameterError("knots t0 < t1 < (a+b)/2 < t2 < t3 are out of order")
        return m

    @classmethod
    def half_kink(cls, d_alpha, alpha):
        alpha = check_alpha(alpha)
        if not 0.0 < d_alpha < 1.0:
            raise ParameterError("d_alpha must lie in (0, 1)")
        if 1.0 / (2.0 * (1.0 - alpha)) + d_alpha > 1.0:
            raise ParameterError("d_alpha too large: F(1/2) would exceed 1")
        return cls("half_kink", alpha, d_alpha=float(d_alpha))

    @classmethod
    def beta_extreme(cls, alpha):
        return cls("beta_extreme", check_alpha(alpha), beta0=beta_extreme_shape(alpha))

    @property
    def knots(self):
        """(t0, t1, t2, t3) of the piecewise case."""
        if self.kind != "piecewise_ab":
            raise ParameterError("knots are defined only for piecewise_ab")
        al, a, b, q, d = self.alpha, self.a, self.b, self.q, self.d_alpha
        return ((1 - al) * (a - d), (1 - al) * a + (1 + q) * al,
                (1 - al) * b - q * al, (1 - al) * (b + d) + al)

    @property
    def distance(self):
        """Known d_K(F0, R_alpha(U(0,1)))."""
        if self.kind == "beta_extreme":
            return 1.0 - 2.0 ** (-self.beta0) - 0.5 / (1.0 - self.alpha)
        return self.d_alpha


def extreme_case_cdf(model):
    """Target law F0 of an :class:`ExtremeCaseModel`.

    The piecewise case has a jump at (a+b)/2; it is replaced by a linear ramp of
    width 2e-9 so the result is a continuous piecewise-linear CDF.
    """
    al = model.alpha
    if model.kind == "beta_extreme":
        return Beta(1.0, model.beta0)
    if model.kind == "half_kink":
        d = model.d_alpha
        return PiecewiseLinearCdf([0.0, 0.5, 1.0], [0.0, 0.5 / (1 - al) + d, 1.0])
    if model.kind == "piecewise_ab":
        a, b, q, d = model.a, model.b, model.q, model.d_alpha
        t0, t1, t2, t3 = model.knots
        mid = 0.5 * (a + b)
        x0 = -(1 - al) * d
        x4 = 1.0 + (1 - al) * d
        xs = [x0, t0, t1, mid - _RAMP, mid + _RAMP, t2, t3, x4]
        fs = [0.0, a, a, (mid - _RAMP - (1 + q) * al) / (1 - al),
              (mid + _RAMP + q * al) / (1 - al), b, b, 1.0]
        return PiecewiseLinearCdf(xs, fs)
    raise ParameterError(f"unknown extreme case {model.kind!r}")


def extreme_case_distance(model, grid_size=100_000):
    """Grid evaluation of d_K(F0, R_alpha(U(0,1))) for the model's F0."""
    return theoretical_trimmed_kd(extreme_case_cdf(model), Uniform(0.0, 1.0), model.alpha, grid_size)
