"""Acceptance criteria.

Each test prints one ``PASS``/``FAIL`` line; the lines are repeated in the
pytest terminal summary (see conftest.py). Run directly with
``python3 tests/test_acceptance.py`` to get only the lines.

Seeds are fixed here once and are not tuned.
"""

import math
import time

import numpy as np
from scipy import stats

from tkfit.alphastar import kuiper_lower_bound, tk_index
from tkfit.asymptotics import credibility_bounds
from tkfit.distributions import Logistic, Mixture, Normal, Uniform
from tkfit.simulate import (TABLE1_TARGETS, TOY_EPS1, TOY_EPS2, clt_draws,
                            comp_scenario, coverage, figure2, stream, table1, table3_cases,
                            toy_analysis)
from tkfit.testing import lambda_rho
from tkfit.trimdist import (ExtremeCaseModel, brute_force_trimmed_kd, empirical_trimmed_kd,
                            extreme_case_cdf, gaussian_trimmed_kd, induced_gamma, step_gamma,
                            theoretical_trimmed_kd, theoretical_trimmed_result)

SEED = 20240611
LINES = []


def report(k, ok, msg):
    line = f"{'PASS' if ok else 'FAIL'} criterion {k}: {msg}"
    LINES.append(line)
    print(line)
    return ok


# -- 1 ---------------------------------------------------------------------------

# (eps1, eps2) -> (lambda, rho_1000) as printed, alpha = 0.1, n = 1000
TABLE1 = {
    (0.1, 0.5): (0.90, 0.048), (0.1, 0.1): (0.50, 0.086), (0.1, 0.02): (0.10, 0.440),
    (0.05, 0.25): (0.90, 0.053), (0.05, 0.05): (0.50, 0.095), (0.05, 0.01): (0.10, 0.489),
    (0.01, 0.05): (0.90, 0.063), (0.01, 0.01): (0.50, 0.114), (0.01, 0.002): (0.10, 0.586),
}
TOL_TABLE1 = 1e-3


def test_criterion_1_table1():
    t = time.perf_counter()
    rows = table1(0.1, 1000, TABLE1_TARGETS)
    elapsed = time.perf_counter() - t
    worst_rho = worst_lam = 0.0
    for r in rows:
        lam, rho = TABLE1[(r["eps1"], r["eps2"])]
        # lambda is printed to two decimals, so it is compared at that precision
        worst_lam = max(worst_lam, abs(round(r["lambda"], 2) - lam))
        worst_rho = max(worst_rho, abs(r["rho_n"] - rho))
    ok = worst_lam <= TOL_TABLE1 and worst_rho <= TOL_TABLE1 and elapsed < 1.0 and len(rows) == 9
    report(1, ok, f"9 cells, max |rho_1000 err| = {worst_rho:.2e}, max |lambda err| (2 dp) = "
                  f"{worst_lam:.2e}, {elapsed * 1e3:.1f} ms")
    assert ok


# -- 2 ---------------------------------------------------------------------------

TOL_ORACLE = 1e-3


def test_criterion_2_oracle_equivalence():
    t = time.perf_counter()
    rng = stream(SEED, 2)
    worst, count = 0.0, 0
    for f0 in (Uniform(), Normal()):
        for alpha in (0.0, 0.1, 0.25, 0.4):
            for _ in range(30):
                n = int(rng.integers(1, 51))
                x = f0.quantile(rng.random(n)) if rng.random() < 0.5 else rng.normal(0.4, 1.3, n)
                x = np.atleast_1d(x)
                d = empirical_trimmed_kd(x, f0, alpha).distance
                grid, gamma = step_gamma(np.sort(np.asarray(f0.cdf(x), dtype=float)))
                d_bf = brute_force_trimmed_kd(gamma, alpha, tol=1e-7, grid=grid)
                worst = max(worst, abs(d - d_bf))
                count += 1
    elapsed = time.perf_counter() - t
    ok = count >= 200 and worst <= TOL_ORACLE and elapsed < 30
    report(2, ok, f"{count} instances, max |empirical - brute force| = {worst:.2e}, {elapsed:.1f} s")
    assert ok


# -- 3 ---------------------------------------------------------------------------

TOL_GAUSS = 1e-4
GAUSS_CASES = [(1, 1, 0.1), (-1, 1, 0.1), (0, 0.8, 0.05), (0, 1.05, 0.1), (0, 1.5, 0.1)]


def test_criterion_3_gaussian_closed_forms():
    errs = []
    for mu, s, a in GAUSS_CASES:
        closed = gaussian_trimmed_kd(mu, s, a)
        grid = theoretical_trimmed_kd(Normal(), Normal(mu, s), a, grid_size=100_000)
        errs.append(abs(closed - grid))
    zero_branch = gaussian_trimmed_kd(0, 1.05, 0.1) == 0.0
    ok = max(errs) <= TOL_GAUSS and zero_branch
    report(3, ok, f"{len(errs)} cases, max |closed - grid| = {max(errs):.2e}, "
                  f"zero branch exact: {zero_branch}")
    assert ok


# -- 4 ---------------------------------------------------------------------------

def test_criterion_4_consistency():
    hits, vals = 0, []
    for s in range(5):
        x = Normal(1, 1).sample(100_000, stream(SEED, 4, s))
        d = empirical_trimmed_kd(x, Normal(), 0.1).distance
        vals.append(d)
        hits += abs(d - 0.35073) <= 0.01
    ok = hits >= 4
    report(4, ok, f"{hits}/5 runs within 0.01 of 0.35073 (values {', '.join(f'{v:.4f}' for v in vals)})")
    assert ok


# -- 5 ---------------------------------------------------------------------------

TOL_CLT = 0.05


def test_criterion_5_clt():
    z = clt_draws(1.0, 1.0, 0.1, 5000, 2000, seed=SEED)
    ks = stats.kstest(z, "norm", args=(0.0, math.sqrt(0.24473))).statistic
    ok = ks <= TOL_CLT
    report(5, ok, f"KS(sqrt(n)(d_n - d), N(0, 0.24473)) = {ks:.4f} (target <= {TOL_CLT}); "
                  f"mean {z.mean():.3f}, var {z.var():.4f}")
    assert ok


# -- 6 ---------------------------------------------------------------------------

def test_criterion_6_coverage():
    beta_case = ExtremeCaseModel.beta_extreme(0.05)
    ab_case = table3_cases()["ab(0.333,0.667)"]
    u = Uniform()
    b_lo, b_up = coverage(extreme_case_cdf(beta_case), u, 0.05, beta_case.distance, 1000, 1200,
                          SEED, prefix=(6, 0))
    a_lo, a_up = coverage(extreme_case_cdf(ab_case), u, ab_case.alpha, ab_case.distance, 1000, 1200,
                          SEED, prefix=(6, 1))
    checks = {
        "beta lower": abs(b_lo - 0.988) <= 0.02,
        "beta upper": abs(b_up - 0.992) <= 0.02,
        "ab lower": abs(a_lo - 0.968) <= 0.02,
        "ab upper": abs(a_up - 1.000) <= 0.005,
    }
    ok = all(checks.values())
    failed = [k for k, v in checks.items() if not v]
    report(6, ok, f"Beta lower/upper {b_lo:.4f}/{b_up:.4f} (0.988/0.992), "
                  f"(1/3,2/3) lower/upper {a_lo:.4f}/{a_up:.4f} (0.968/1.000)"
                  + (f"; out of band: {', '.join(failed)}" if failed else ""))
    assert ok


# -- 7 ---------------------------------------------------------------------------

def test_criterion_7_credibility():
    lam, rho = lambda_rho(0.05, TOY_EPS1, TOY_EPS2)
    f3 = credibility_bounds(0.0477, 0.05, lam, rho, 0.5)
    f1 = credibility_bounds(0.0140, 0.05, lam, rho, 0.5)
    ok = (abs(f3.l_delta - 359) <= 2 and abs(f3.u_delta - 1386) <= 2
          and abs(f1.l_delta / 4170 - 1) <= 0.01 and abs(f1.u_delta / 16079 - 1) <= 0.01)
    report(7, ok, f"F3: L={f3.l_delta:.1f} U={f3.u_delta:.1f} (359, 1386 +/- 2); "
                  f"F1: L={f1.l_delta:.1f} U={f1.u_delta:.1f} (4170, 16079 +/- 1%)")
    assert ok


# -- 8 ---------------------------------------------------------------------------

def test_criterion_8_figure2():
    model = Mixture(0.9, Normal(0, 1), Normal(3, 1))
    out = figure2([0.05, 0.12], ns=(6000,), replicates=150, seed=SEED, eps1=0.05, eps2=0.05,
                  model=model)
    lo, hi = out[6000]
    ok = lo >= 0.9 and hi <= 0.05
    report(8, ok, f"rejection frequency {lo:.3f} at alpha=0.05 (>= 0.9), {hi:.3f} at alpha=0.12 (<= 0.05)")
    assert ok


# -- 9 ---------------------------------------------------------------------------

def test_criterion_9_estimators():
    below = 0
    for r in range(100):
        s = comp_scenario(1, 1000, 0.05, stream(SEED, 9, 0, r))
        below += kuiper_lower_bound(s, Uniform(), 0.05) <= 0.05
    model = Logistic(0.0, math.sqrt(3.0) / math.pi)
    vals = [tk_index(model.sample(20000, stream(SEED, 9, 1, r)), Normal(), TOY_EPS1).alpha_star
            for r in range(10)]
    inside = sum(0.04 <= v <= 0.07 for v in vals)
    ok = below >= 93 and inside >= 8
    report(9, ok, f"Kuiper bound <= 0.05 in {below}/100 runs (>= 93); logistic alpha*_n in "
                  f"[0.04, 0.07] for {inside}/10 seeds (median {np.median(vals):.4f})")
    assert ok


# -- 10 --------------------------------------------------------------------------

def _ks(y):
    n = y.size
    i = np.arange(n)
    return max(np.max(y - i / n), np.max((i + 1) / n - y))


def _in_class(res, slack=1e-9):
    h = res.h_alpha()
    s = np.diff(h) / np.diff(res.grid)
    return (abs(h[0]) <= 1e-12 and abs(h[-1] - 1) <= 1e-9
            and s.min() >= -slack and s.max() <= 1 / (1 - res.alpha) + slack)


def test_criterion_10_properties():
    rng = stream(SEED, 10)
    checks = {}

    exact = True
    for _ in range(100):
        x = rng.normal(size=int(rng.integers(1, 500)))
        exact &= empirical_trimmed_kd(x, Normal(), 0.0).distance == _ks(np.sort(Normal().cdf(x)))
    checks["alpha=0 KS reduction"] = exact

    mono = True
    alphas = np.round(np.arange(0, 0.501, 0.05), 2)
    for _ in range(50):
        x = rng.standard_t(3, size=300)
        d = [empirical_trimmed_kd(x, Normal(), a).distance for a in alphas]
        mono &= bool(np.all(np.diff(d) <= 1e-12))  # rounding slack
    checks["monotone in alpha"] = mono

    member = True
    for a in (0.0, 0.05, 0.2, 0.5):
        member &= _in_class(empirical_trimmed_kd(rng.normal(0.5, 1.5, 400), Normal(), a))
        member &= _in_class(theoretical_trimmed_result(Normal(), Normal(1, 1.3), a, 20_000))
    checks["C_alpha membership"] = member

    null, worst = True, 0.0
    for _ in range(20):
        a = float(rng.uniform(0.02, 0.3))
        kind = rng.integers(3)
        if kind == 0:
            q = Normal(float(rng.uniform(-5, 5)), float(rng.uniform(0.2, 3)))
        elif kind == 1:
            q = Logistic(float(rng.uniform(-5, 5)), float(rng.uniform(0.2, 2)))
        else:
            lo = float(rng.uniform(-4, 3))
            q = Uniform(lo, lo + float(rng.uniform(0.5, 3)))
        f = Mixture(1 - a, Normal(), q)
        # grid tolerance: largest jump of Gamma between neighbouring nodes
        _, gamma = induced_gamma(Normal(), f, 100_000)
        d = theoretical_trimmed_kd(Normal(), f, a, 100_000)
        worst = max(worst, d)
        null &= d <= np.max(np.diff(gamma))
    checks["contamination nullity (20 mixtures)"] = null

    n_toy = 20000
    rows = toy_analysis(n=n_toy, seed=SEED)
    # "not reached" means N_subs > n, which is consistent with [L, U] only when U > n
    inside = all((r.n_subs is None and r.u_delta > n_toy)
                 or (r.n_subs is not None and r.l_delta <= r.n_subs <= r.u_delta) for r in rows)
    checks["N_subs in [L, U] on toy scenarios"] = inside

    ok = all(checks.values())
    toy = ", ".join(f"{r.name}: {r.n_subs if r.n_subs else f'not reached (> {n_toy})'} vs "
                    f"[{r.l_delta:.0f}, {r.u_delta:.0f}]" for r in rows)
    report(10, ok, "; ".join(f"{k}: {'ok' if v else 'FAILED'}" for k, v in checks.items())
           + f" (max null distance {worst:.1e}; {toy})")
    assert ok


if __name__ == "__main__":
    import sys
    fns = [v for k, v in sorted(globals().items(), key=lambda kv: kv[0]) if k.startswith("test_criterion_")]
    fns.sort(key=lambda f: int(f.__name__.split("_")[2]))
    failed = 0
    for fn in fns:
        try:
            fn()
        except AssertionError:
            failed += 1
    sys.exit(1 if failed else 0)
