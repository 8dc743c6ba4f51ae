"""Seeded Monte Carlo experiments.

Replicate ``i`` of an experiment with seed ``s`` draws from
``default_rng(SeedSequence(s, spawn_key=(i,)))`` (experiments with several
cells add the cell index in front), so results do not depend on the number of
workers or on scheduling.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .alphastar import kuiper_lower_bound, tk_index
from .asymptotics import confidence_bounds, credibility_bounds, subsample_credibility
from .distributions import Beta, Logistic, Mixture, Normal, Uniform
from .errors import ParameterError
from .testing import lambda_rho, plan_test
from .trimdist import (ExtremeCaseModel, empirical_trimmed_kd, extreme_case_cdf,
                       gaussian_trimmed_kd, trimmed_kd_sorted)


def stream(seed, *key):
    """Generator for replicate ``key`` of an experiment seeded with ``seed``."""
    return np.random.default_rng(np.random.SeedSequence(int(seed), spawn_key=tuple(int(k) for k in key)))


def _run_chunk(args):
    fn, seed, prefix, idx, payload = args
    return [fn(stream(seed, *prefix, i), payload) for i in idx]


def replicate(fn, reps, seed, payload=None, prefix=(), workers=1):
    """``[fn(rng_i, payload) for i in range(reps)]`` with per-replicate streams.

    ``fn`` must be a module-level function when ``workers > 1``.
    """
    if reps < 1:
        raise ParameterError("need at least one replicate")
    if workers <= 1:
        return [fn(stream(seed, *prefix, i), payload) for i in range(reps)]
    chunks = np.array_split(np.arange(reps), min(workers * 4, reps))
    with ProcessPoolExecutor(max_workers=workers) as ex:
        parts = ex.map(_run_chunk, [(fn, seed, prefix, c.tolist(), payload) for c in chunks])
        return [r for part in parts for r in part]


# ---------------------------------------------------------------------------
# error-bound table
# ---------------------------------------------------------------------------

TABLE1_TARGETS = [(e1, e2) for e1 in (0.1, 0.05, 0.01) for e2 in (5 * e1, e1, e1 / 5)]


def table1(alpha=0.1, n=1000, targets=TABLE1_TARGETS):
    """Rows (eps1, eps2, lambda, rho_n) for the test plans of a grid of error targets."""
    rows = []
    for e1, e2 in targets:
        p = plan_test(alpha, e1, e2, n)
        rows.append({"eps1": e1, "eps2": e2, "lambda": p.lam, "rho_n": p.rho_n,
                     "threshold": p.threshold})
    return rows


# ---------------------------------------------------------------------------
# rejection frequency against the trimming level
# ---------------------------------------------------------------------------

FIG2_MODEL = Mixture(0.9, Normal(0.0, 1.0), Normal(3.0, 1.0))


def _fig2_rep(rng, payload):
    model, f0, n, alphas = payload
    y = np.sort(np.asarray(f0.cdf(model.sample(n, rng))))
    return [trimmed_kd_sorted(y, a) for a in alphas]


def figure2(alphas, ns=(2000, 6000), replicates=150, seed=0, eps1=0.05, eps2=0.05,
            model=FIG2_MODEL, f0=Normal(0.0, 1.0), workers=1):
    """Rejection frequency of the test over a grid of trimming levels.

    Returns a dict ``{n: [frequency for each alpha]}``; one sample per replicate
    is shared by all trimming levels.
    """
    alphas = [float(a) for a in alphas]
    out = {}
    for k, n in enumerate(ns):
        stats = np.array(replicate(_fig2_rep, replicates, seed, (model, f0, n, alphas), (k,), workers))
        thr = np.array([plan_test(a, eps1, eps2, n).threshold for a in alphas])
        out[n] = (stats > thr[None, :]).mean(axis=0).tolist()
    return out


# ---------------------------------------------------------------------------
# coverage of the conservative confidence bounds
# ---------------------------------------------------------------------------

def table3_cases(alpha_beta=0.05, alpha_ab=0.01, q=0.01):
    """The extreme cases: Beta, half-kink and five (a, b) piecewise laws."""
    cases = {
        "beta": ExtremeCaseModel.beta_extreme(alpha_beta),
        "half_kink": ExtremeCaseModel.half_kink(0.1, alpha_beta),
    }
    for a, b in ((0.01, 0.99), (0.49, 0.51), (1 / 3, 2 / 3), (0.01, 0.5), (0.6, 0.8)):
        cases[f"ab({a:.3g},{b:.3g})"] = ExtremeCaseModel.piecewise_ab(a, b, q, alpha_ab)
    return cases


def _coverage_rep(rng, payload):
    f0, f, n, alpha, beta, true_d = payload
    y = np.sort(np.asarray(f0.cdf(f.sample(n, rng))))
    ci = confidence_bounds(trimmed_kd_sorted(y, alpha), n, alpha, beta)
    return ci.lower <= true_d, ci.upper >= true_d


def coverage(f0, f, alpha, true_d, n, M, seed, beta=0.05, prefix=(), workers=1):
    """(lower, upper) coverage frequencies of the bounds over ``M`` samples of F."""
    hits = np.array(replicate(_coverage_rep, M, seed, (f0, f, n, alpha, beta, true_d), prefix, workers))
    return float(hits[:, 0].mean()), float(hits[:, 1].mean())


def table3(cases=None, ns=(100, 1000, 5000), M=1200, seed=0, beta=0.05, workers=1):
    """Coverage of the bounds for F = U(0,1) and each extreme target law.

    The known distance of every case is used as the truth.
    """
    cases = table3_cases() if cases is None else cases
    rows = []
    for ci, (name, m) in enumerate(cases.items()):
        f0 = extreme_case_cdf(m)
        for k, n in enumerate(ns):
            lo, up = coverage(f0, Uniform(), m.alpha, m.distance, n, M, seed, beta, (ci, k), workers)
            rows.append({"case": name, "n": n, "lower": lo, "upper": up})
    return rows


# ---------------------------------------------------------------------------
# CLT check
# ---------------------------------------------------------------------------

def _clt_rep(rng, payload):
    mu, sigma, alpha, n, d = payload
    y = np.sort(Normal().cdf(mu + sigma * rng.standard_normal(n)))
    return math.sqrt(n) * (trimmed_kd_sorted(y, alpha) - d)


def clt_draws(mu, sigma, alpha, n, reps, seed, workers=1):
    """Draws of sqrt(n)(d_n - d) for F0 = N(0,1) and F = N(mu, sigma^2)."""
    d = gaussian_trimmed_kd(mu, sigma, alpha)
    return np.array(replicate(_clt_rep, reps, seed, (mu, sigma, alpha, n, d), workers=workers))


# ---------------------------------------------------------------------------
# estimator comparison with a fixed contaminated fraction
# ---------------------------------------------------------------------------

def comp_scenario(k, n, alpha_star, rng):
    """Sample with exactly round(n alpha*) contaminated points, on the U(0,1) scale."""
    nc = int(round(n * alpha_star))
    nm = n - nc
    if k == 1:
        x = Normal().cdf(rng.standard_normal(nm))
        y = Normal().cdf(rng.standard_normal(nc) + 4.0)
    elif k == 2:
        x = Normal().cdf(rng.standard_normal(nm))
        y = Normal().cdf(3.0 * rng.standard_normal(nc) + 4.0)
    elif k == 3:
        x = rng.random(nm)
        y = Beta(5.0, 1.0).sample(nc, rng)
    else:
        raise ParameterError("scenario must be 1, 2 or 3")
    return np.concatenate((x, y))


def _comp_rep(rng, payload):
    k, n, a, eps1, gamma = payload
    s = comp_scenario(k, n, a, rng)
    return tk_index(s, Uniform(), eps1).alpha_star, kuiper_lower_bound(s, Uniform(), gamma)


def comp(scenarios=(1, 2, 3), alpha_stars=(0.05, 0.2), n=1000, runs=100, seed=0,
         eps1=0.05, gamma=0.05, workers=1):
    """Per-run (alpha*_n, Kuiper bound) for each scenario and contamination level."""
    out = []
    for k in scenarios:
        for j, a in enumerate(alpha_stars):
            res = replicate(_comp_rep, runs, seed, (k, n, a, eps1, gamma), (k, j), workers)
            out.append({"scenario": k, "alpha_star": a,
                        "tk_index": [r[0] for r in res], "kuiper": [r[1] for r in res]})
    return out


# ---------------------------------------------------------------------------
# toy credibility analysis
# ---------------------------------------------------------------------------

TOY_MODELS = {
    "F1": Logistic(0.0, math.sqrt(3.0) / math.pi),
    "F2": Mixture(0.867, Normal(0.0, 1.0), Normal(0.0, 4.0)),
    "F3": Mixture(0.9, Normal(0.0, 1.0), Normal(3.0, 1.0)),
}
TOY_EPS1 = 0.05 / (0.999 * math.e**2)
TOY_EPS2 = 0.05


@dataclass
class ToyRow:
    name: str
    d_n: float
    lower: float
    upper: float
    l_delta: float
    u_delta: float
    n_subs: int | None
    alpha_star: float


def toy_analysis(n=20000, alpha=0.05, beta=0.05, delta=0.5, M=200, seed=0,
                 models=None, eps1=TOY_EPS1, eps2=TOY_EPS2, tk_eps1=None):
    """Distance, bounds, credibility interval, subsampling index and alpha*_n per model.

    ``tk_eps1`` (default ``eps1``) is the level used for alpha*_n.
    """
    models = TOY_MODELS if models is None else models
    f0 = Normal(0.0, 1.0)
    lam, rho = lambda_rho(alpha, eps1, eps2)
    rows = []
    for k, (name, model) in enumerate(models.items()):
        x = model.sample(n, stream(seed, k))
        d = empirical_trimmed_kd(x, f0, alpha).distance
        ci = confidence_bounds(d, n, alpha, beta)
        cb = credibility_bounds(d, alpha, lam, rho, delta)
        ns = subsample_credibility(x, f0, alpha, eps1, eps2, delta, M, seed=seed)
        a = tk_index(x, f0, tk_eps1 or eps1).alpha_star
        rows.append(ToyRow(name, d, ci.lower, ci.upper, cb.l_delta, cb.u_delta, ns, a))
    return rows
