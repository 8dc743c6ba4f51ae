"""Distribution models on the real line.

Every model is an immutable dataclass exposing ``cdf``, ``quantile``, ``pdf``,
``support`` and ``sample``. Methods accept scalars or arrays. ``quantile`` is
the left-continuous inverse ``inf{x : p <= F(x)}``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import special
from .errors import DomainError, InputError, ParameterError


def _out(v):
    v = np.asarray(v, dtype=float)
    return float(v) if v.shape == () else v


def _check_p(p, closed=False):
    p = np.asarray(p, dtype=float)
    ok = (p >= 0.0) & (p <= 1.0) if closed else (p > 0.0) & (p < 1.0)
    if np.any(~ok):
        rng = "[0, 1]" if closed else "(0, 1)"
        raise DomainError(f"probability must lie in {rng}")
    return p


@dataclass(frozen=True)
class QuantileSpec:
    """Evaluation window ``[clip_epsilon, 1 - clip_epsilon]`` for quantile grids."""

    clip_epsilon: float = 1e-6

    def __post_init__(self):
        if not 0.0 < self.clip_epsilon < 0.5:
            raise ParameterError("clip_epsilon must lie in (0, 0.5)")


class DistributionModel:
    """Base class. Subclasses set ``continuous`` and ``compact``."""

    continuous = True
    compact = False

    def cdf(self, x):
        raise NotImplementedError

    def quantile(self, p):
        raise NotImplementedError

    def pdf(self, x):
        raise NotImplementedError

    def support(self):
        raise NotImplementedError

    def sample(self, n, rng):
        """Draw ``n`` variates by inversion unless a subclass knows better."""
        return self.quantile(_unit_open(rng, n))


def _unit_open(rng, n):
    # uniform on the open interval (0, 1)
    u = rng.random(n)
    while np.any(u == 0.0):
        u[u == 0.0] = rng.random(int(np.sum(u == 0.0)))
    return u


@dataclass(frozen=True)
class Uniform(DistributionModel):
    a: float = 0.0
    b: float = 1.0
    compact = True

    def __post_init__(self):
        if not (math.isfinite(self.a) and math.isfinite(self.b) and self.b > self.a):
            raise ParameterError("Uniform requires finite a < b")

    def cdf(self, x):
        x = np.asarray(x, dtype=float)
        return _out(np.clip((x - self.a) / (self.b - self.a), 0.0, 1.0))

    def quantile(self, p):
        p = _check_p(p, closed=True)
        return _out(self.a + p * (self.b - self.a))

    def pdf(self, x):
        x = np.asarray(x, dtype=float)
        return _out(np.where((x >= self.a) & (x <= self.b), 1.0 / (self.b - self.a), 0.0))

    def support(self):
        return (self.a, self.b)

    def sample(self, n, rng):
        return self.a + (self.b - self.a) * rng.random(n)


@dataclass(frozen=True)
class Normal(DistributionModel):
    mu: float = 0.0
    sigma: float = 1.0

    def __post_init__(self):
        if not (math.isfinite(self.mu) and self.sigma > 0.0 and math.isfinite(self.sigma)):
            raise ParameterError("Normal requires finite mu and sigma > 0")

    def cdf(self, x):
        return special.norm_cdf((np.asarray(x, dtype=float) - self.mu) / self.sigma)

    def quantile(self, p):
        return _out(self.mu + self.sigma * np.asarray(special.norm_ppf(_check_p(p))))

    def pdf(self, x):
        z = (np.asarray(x, dtype=float) - self.mu) / self.sigma
        return _out(special.norm_pdf(z) / self.sigma)

    def support(self):
        return (-math.inf, math.inf)

    def sample(self, n, rng):
        return self.mu + self.sigma * rng.standard_normal(n)


@dataclass(frozen=True)
class Logistic(DistributionModel):
    loc: float = 0.0
    scale: float = 1.0

    def __post_init__(self):
        if not (math.isfinite(self.loc) and self.scale > 0.0 and math.isfinite(self.scale)):
            raise ParameterError("Logistic requires finite location and scale > 0")

    def cdf(self, x):
        z = (np.asarray(x, dtype=float) - self.loc) / self.scale
        # 1 / (1 + e^{-z}) written to avoid overflow on either tail
        e = np.exp(-np.abs(z))
        return _out(np.where(z >= 0, 1.0 / (1.0 + e), e / (1.0 + e)))

    def quantile(self, p):
        p = _check_p(p)
        return _out(self.loc + self.scale * (np.log(p) - np.log1p(-p)))

    def pdf(self, x):
        z = np.abs((np.asarray(x, dtype=float) - self.loc) / self.scale)
        e = np.exp(-z)
        return _out(e / (self.scale * (1.0 + e) ** 2))

    def support(self):
        return (-math.inf, math.inf)


@dataclass(frozen=True)
class Beta(DistributionModel):
    p: float = 1.0
    q: float = 1.0
    compact = True

    def __post_init__(self):
        if not (self.p > 0.0 and self.q > 0.0 and math.isfinite(self.p) and math.isfinite(self.q)):
            raise ParameterError("Beta requires shapes p > 0 and q > 0")

    def cdf(self, x):
        x = np.clip(np.asarray(x, dtype=float), 0.0, 1.0)
        return special.betainc(self.p, self.q, x)

    def quantile(self, p):
        p = _check_p(p, closed=True)
        inner = np.clip(p, 1e-300, 1.0 - 1e-16)
        x = np.asarray(special.beta_quantile(inner, self.p, self.q))
        return _out(np.where(p <= 0.0, 0.0, np.where(p >= 1.0, 1.0, x)))

    def pdf(self, x):
        x = np.asarray(x, dtype=float)
        inside = (x > 0.0) & (x < 1.0)
        xs = np.where(inside, x, 0.5)
        lb = math.lgamma(self.p) + math.lgamma(self.q) - math.lgamma(self.p + self.q)
        dens = np.exp((self.p - 1.0) * np.log(xs) + (self.q - 1.0) * np.log1p(-xs) - lb)
        return _out(np.where(inside, dens, 0.0))

    def support(self):
        return (0.0, 1.0)

    def sample(self, n, rng):
        return rng.beta(self.p, self.q, n)


@dataclass(frozen=True)
class Mixture(DistributionModel):
    """``weight * left + (1 - weight) * right``."""

    weight: float
    left: DistributionModel
    right: DistributionModel

    def __post_init__(self):
        if not 0.0 <= self.weight <= 1.0:
            raise ParameterError("mixture weight must lie in [0, 1]")

    @property
    def continuous(self):
        return self.left.continuous and self.right.continuous

    @property
    def compact(self):
        return self.left.compact and self.right.compact

    def cdf(self, x):
        w = self.weight
        return _out(w * np.asarray(self.left.cdf(x)) + (1.0 - w) * np.asarray(self.right.cdf(x)))

    def pdf(self, x):
        w = self.weight
        return _out(w * np.asarray(self.left.pdf(x)) + (1.0 - w) * np.asarray(self.right.pdf(x)))

    def support(self):
        a, b = self.left.support(), self.right.support()
        return (min(a[0], b[0]), max(a[1], b[1]))

    def quantile(self, p):
        p = _check_p(p, closed=self.compact)
        if self.weight == 1.0:
            return self.left.quantile(p)
        if self.weight == 0.0:
            return self.right.quantile(p)
        # the mixture quantile lies between the component quantiles
        ql = np.asarray(self.left.quantile(p), dtype=float)
        qr = np.asarray(self.right.quantile(p), dtype=float)
        lo = np.minimum(ql, qr)
        hi = np.maximum(ql, qr)
        # lo itself may already satisfy F(lo) >= p
        done = np.asarray(self.cdf(lo)) >= p
        for _ in range(200):
            mid = 0.5 * (lo + hi)
            below = np.asarray(self.cdf(mid)) < p
            lo = np.where(below, mid, lo)
            hi = np.where(below, hi, mid)
            if np.all(hi - lo <= 1e-15 * np.maximum(1.0, np.abs(hi))):
                break
        return _out(np.where(done, np.minimum(ql, qr), hi))

    def sample(self, n, rng):
        pick = rng.random(n) < self.weight
        k = int(pick.sum())
        out = np.empty(n)
        out[pick] = self.left.sample(k, rng)
        out[~pick] = self.right.sample(n - k, rng)
        return out


@dataclass(frozen=True, eq=False)
class Empirical(DistributionModel):
    """Empirical law of a sample; ``values`` is stored sorted."""

    values: np.ndarray = field(repr=False)
    continuous = False

    def __post_init__(self):
        v = np.sort(np.asarray(self.values, dtype=float).ravel())
        if v.size == 0:
            raise InputError("empirical law needs a nonempty sample")
        if not np.all(np.isfinite(v)):
            raise InputError("sample contains non-finite values")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @property
    def n(self):
        return self.values.size

    def cdf(self, x):
        return _out(np.searchsorted(self.values, x, side="right") / self.n)

    def quantile(self, p):
        p = np.asarray(p, dtype=float)
        if np.any(~((p > 0.0) & (p <= 1.0))):
            raise DomainError("probability must lie in (0, 1]")
        # ceil(n p)-th order statistic; guard against n*p landing a hair above an integer
        k = np.ceil(self.n * p - 1e-9 * self.n * p).astype(np.int64)
        k = np.clip(k, 1, self.n)
        return _out(self.values[k - 1])

    def pdf(self, x):
        raise NotImplementedError("empirical laws have no density")

    def support(self):
        return (float(self.values[0]), float(self.values[-1]))

    def sample(self, n, rng):
        return self.values[rng.integers(0, self.n, n)]


@dataclass(frozen=True, eq=False)
class PiecewiseLinearCdf(DistributionModel):
    """CDF interpolating ``(x[k], F[k])`` linearly, 0 left of ``x[0]``, 1 right of ``x[-1]``."""

    x: np.ndarray = field(repr=False)
    F: np.ndarray = field(repr=False)
    compact = True

    def __post_init__(self):
        x = np.asarray(self.x, dtype=float).ravel().copy()
        F = np.asarray(self.F, dtype=float).ravel().copy()
        if x.size < 2 or x.size != F.size:
            raise ParameterError("need at least two knots with matching x and F")
        if np.any(np.diff(x) <= 0.0) or not np.all(np.isfinite(x)):
            raise ParameterError("knot abscissae must be finite and strictly increasing")
        if np.any(np.diff(F) < 0.0):
            raise ParameterError("CDF values must be nondecreasing")
        if abs(F[0]) > 1e-12 or abs(F[-1] - 1.0) > 1e-12:
            raise ParameterError("CDF values must run from 0 to 1")
        F[0], F[-1] = 0.0, 1.0
        x.setflags(write=False)
        F.setflags(write=False)
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "F", F)

    def cdf(self, x):
        return _out(np.interp(np.asarray(x, dtype=float), self.x, self.F))

    def quantile(self, p):
        p = _check_p(p, closed=True)
        k = np.clip(np.searchsorted(self.F, p, side="left"), 1, self.F.size - 1)
        f0, f1 = self.F[k - 1], self.F[k]
        x0, x1 = self.x[k - 1], self.x[k]
        with np.errstate(invalid="ignore", divide="ignore"):
            frac = np.where(f1 > f0, (p - f0) / (f1 - f0), 0.0)
        return _out(np.where(p <= 0.0, self.x[0], x0 + frac * (x1 - x0)))

    def pdf(self, x):
        x = np.asarray(x, dtype=float)
        slopes = np.diff(self.F) / np.diff(self.x)
        k = np.searchsorted(self.x, x, side="right") - 1
        inside = (k >= 0) & (k < slopes.size)
        return _out(np.where(inside, slopes[np.clip(k, 0, slopes.size - 1)], 0.0))

    def support(self):
        return (float(self.x[0]), float(self.x[-1]))


def eval_cdf(model, x):
    """F(x) for ``model``."""
    return model.cdf(x)


def eval_quantile(model, p):
    """Left-continuous quantile F^{-1}(p) for ``model``."""
    return model.quantile(p)
