"""Special functions: standard normal, Kolmogorov distribution, regularized
incomplete Beta and their inverses.

All functions accept scalars or arrays and return the same shape (a Python
float for scalar input).
"""

import math

import numpy as np

from ._kernels import K
from .errors import DomainError, ParameterError


def _apply(fn, *args):
    arrs = np.broadcast_arrays(*[np.asarray(a, dtype=float) for a in args])
    shape = arrs[0].shape
    flat = [np.ascontiguousarray(a.ravel()) for a in arrs]
    out = fn(*flat).reshape(shape)
    return float(out) if shape == () else out


def _check_open_unit(p, name="p"):
    p = np.asarray(p, dtype=float)
    if np.any(~((p > 0.0) & (p < 1.0))):
        raise DomainError(f"{name} must lie in (0, 1)")


def _check_shapes(a, b):
    if np.any(~(np.asarray(a, dtype=float) > 0.0)) or np.any(~(np.asarray(b, dtype=float) > 0.0)):
        raise ParameterError("Beta shape parameters must be positive")


def norm_cdf(x):
    """Standard normal CDF, accurate to about 1e-15 absolute."""
    return _apply(K.norm_cdf, x)


def norm_ppf(p):
    """Standard normal quantile; ``p`` in (0, 1)."""
    _check_open_unit(p)
    return _apply(K.norm_ppf, p)


def norm_pdf(x):
    x = np.asarray(x, dtype=float)
    out = np.exp(-0.5 * x * x) / math.sqrt(2.0 * math.pi)
    return float(out) if out.shape == () else out


def kolmogorov_cdf(x):
    """Psi(x) = P(sup |B(t)| <= x) for a Brownian bridge B."""
    return _apply(K.kolmogorov_cdf, x)


def kolmogorov_quantile(p):
    """Inverse of :func:`kolmogorov_cdf`; ``p`` in (0, 1)."""
    _check_open_unit(p)
    return _apply(K.kolmogorov_ppf, p)


def betainc(a, b, x):
    """Regularized incomplete Beta function I_x(a, b)."""
    _check_shapes(a, b)
    return _apply(K.betainc, a, b, x)


def betaincc(a, b, x):
    """Upper tail 1 - I_x(a, b), computed without cancellation."""
    _check_shapes(a, b)
    return _apply(K.betaincc, a, b, x)


def beta_quantile(p, a, b):
    """Quantile of Beta(a, b): x with I_x(a, b) = p."""
    _check_shapes(a, b)
    _check_open_unit(p)
    return _apply(K.betaincinv, a, b, p)


def beta_isf(q, a, b):
    """Inverse survival function: x with 1 - I_x(a, b) = q.

    Accurate for tiny ``q`` where ``beta_quantile(1 - q, ...)`` would lose
    digits to cancellation.
    """
    _check_shapes(a, b)
    _check_open_unit(q, "q")
    return _apply(K.betainccinv, a, b, q)
