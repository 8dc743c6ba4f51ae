"""Small shared helpers."""

import math

import numpy as np

from .errors import BracketError, InputError, ParameterError


def check_alpha(alpha):
    alpha = float(alpha)
    if not 0.0 <= alpha < 1.0:
        raise ParameterError(f"alpha must lie in [0, 1), got {alpha}")
    return alpha


def check_prob(x, name):
    x = float(x)
    if not 0.0 < x < 1.0:
        raise ParameterError(f"{name} must lie in (0, 1), got {x}")
    return x


def as_sample(sample):
    x = np.asarray(sample, dtype=float).ravel()
    if x.size == 0:
        raise InputError("sample is empty")
    if not np.all(np.isfinite(x)):
        raise InputError("sample contains non-finite values")
    return x


def bisect_decreasing(fn, lo, hi, tol):
    """Smallest-root bisection for a nonincreasing ``fn`` with fn(lo) > 0 >= fn(hi).

    Returns the final bracket ``(lo, hi)``; ``lo`` always has fn > 0.
    """
    flo, fhi = fn(lo), fn(hi)
    if not (flo > 0.0 and fhi <= 0.0):
        raise BracketError(f"no sign change on [{lo}, {hi}]: f(lo)={flo}, f(hi)={fhi}")
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if fn(mid) > 0.0:
            lo = mid
        else:
            hi = mid
    return lo, hi


def is_finite(x):
    return isinstance(x, (int, float)) and math.isfinite(x)
