"""Uniformly exponentially consistent test of H0: d_K(F0, R_alpha(F)) <= rho1.

The test rejects when the empirical trimmed distance exceeds the threshold
``(1 - lambda) * rho1 + lambda * rho2``. Error probabilities are bounded by

    EI  <= 2 exp(-2 lambda^2     n (1-alpha)^2 (rho2 - rho1)^2)
    EII <= 2 exp(-2 (1-lambda)^2 n (1-alpha)^2 (rho2 - rho1)^2)

For rho1 = 0, the plan picks lambda and rho from targets (eps1, eps2) via
lambda = 1/2 + log(eps2/eps1)/4 and rho = sqrt(log(2/eps1)/2) / ((1-alpha) lambda).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._util import as_sample, check_alpha
from .errors import InputError, ParameterError, PlanError
from .trimdist import empirical_trimmed_kd


@dataclass(frozen=True)
class TestPlan:
    """Threshold calculus for one sample size.

    ``rho`` is the separation scale at n = 1 and ``rho_n = rho / sqrt(n)``.
    With ``rho1 > 0`` the alternative sits at ``rho1 + rho_n``.
    """

    __test__ = False  # not a pytest class

    alpha: float
    eps1: float
    eps2: float
    n: int
    lam: float
    rho: float
    rho_n: float
    threshold: float
    rho1: float = 0.0

    @property
    def rho2(self):
        return self.rho1 + self.rho_n


@dataclass(frozen=True)
class TestOutcome:
    __test__ = False

    statistic: float
    threshold: float
    reject: bool
    ei_bound: float
    eii_bound: float


def lambda_rho(alpha, eps1, eps2):
    """(lambda, rho) solving the two error-target equations at n = 1."""
    alpha = check_alpha(alpha)
    for name, v in (("eps1", eps1), ("eps2", eps2)):
        if not 0.0 < v < 1.0:
            raise PlanError(f"{name} must lie in (0, 1), got {v}")
    lo, hi = eps1 * math.exp(-2.0), eps1 * math.exp(2.0)
    if not lo < eps2 < hi:
        raise PlanError(
            f"need eps1*e^-2 < eps2 < eps1*e^2, i.e. eps2 in ({lo:.6g}, {hi:.6g}); got eps2={eps2}")
    lam = 0.5 + 0.25 * math.log(eps2 / eps1)
    rho = math.sqrt(0.5 * math.log(2.0 / eps1)) / ((1.0 - alpha) * lam)
    return lam, rho


def plan_test(alpha, eps1, eps2, n, rho1=0.0):
    """Build a :class:`TestPlan`.

    Parameters
    ----------
    alpha : float
        Trimming level in [0, 1).
    eps1, eps2 : float
        Targets for the two exponential error bounds.
    n : int
        Sample size.
    rho1 : float, optional
        Null radius. The default 0 tests membership in the contamination
        neighbourhood itself; a positive value shifts both hypotheses by rho1.
    """
    n = int(n)
    if n < 1:
        raise ParameterError("n must be at least 1")
    if not rho1 >= 0.0:
        raise ParameterError("rho1 must be nonnegative")
    lam, rho = lambda_rho(alpha, eps1, eps2)
    rho_n = rho / math.sqrt(n)
    return TestPlan(float(alpha), float(eps1), float(eps2), n, lam, rho, rho_n,
                    rho1 + lam * rho_n, float(rho1))


def error_bounds(alpha, rho1, rho2, lam, n):
    """Exponential bounds (EI, EII) for separation ``rho2 - rho1``."""
    alpha = check_alpha(alpha)
    if not 0.0 <= rho1 < rho2:
        raise ParameterError("need 0 <= rho1 < rho2")
    if not 0.0 < lam < 1.0:
        raise ParameterError("lambda must lie in (0, 1)")
    if n < 1:
        raise ParameterError("n must be at least 1")
    base = n * (1.0 - alpha) ** 2 * (rho2 - rho1) ** 2
    return 2.0 * math.exp(-2.0 * lam**2 * base), 2.0 * math.exp(-2.0 * (1.0 - lam) ** 2 * base)


def decide(statistic, plan):
    """Outcome for a precomputed statistic; rejection is strict."""
    ei, eii = error_bounds(plan.alpha, plan.rho1, plan.rho2, plan.lam, plan.n)
    return TestOutcome(float(statistic), plan.threshold, bool(statistic > plan.threshold), ei, eii)


def run_test(sample, f0, plan):
    """Compute the trimmed distance of ``sample`` to F0 and apply ``plan``."""
    x = as_sample(sample)
    if x.size != plan.n:
        raise InputError(f"plan is for n={plan.n} but the sample has {x.size} points")
    return decide(empirical_trimmed_kd(x, f0, plan.alpha).distance, plan)


def rejection_frequency(statistics, plan):
    return float(np.mean(np.asarray(statistics) > plan.threshold))
