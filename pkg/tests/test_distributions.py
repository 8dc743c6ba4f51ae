import math

import numpy as np
import pytest
from scipy import stats

from tkfit.distributions import (Beta, Empirical, Logistic, Mixture, Normal,
                                 PiecewiseLinearCdf, QuantileSpec, Uniform, eval_cdf,
                                 eval_quantile)
from tkfit.errors import DomainError, InputError, ParameterError

MODELS = [
    Uniform(0, 1), Uniform(-2, 3), Normal(0, 1), Normal(1.5, 0.3),
    Logistic(0, math.sqrt(3) / math.pi), Beta(2, 5), Beta(1, 1.6374523),
    Mixture(0.9, Normal(0, 1), Normal(3, 1)),
    PiecewiseLinearCdf([0, 0.5, 1], [0, 0.7, 1]),
]


def test_basic_values():
    assert eval_cdf(Normal(0, 1), 0.0) == pytest.approx(0.5)
    assert eval_cdf(Uniform(0, 1), 0.3) == pytest.approx(0.3)
    assert eval_cdf(Normal(0, 1), 1.959964) == pytest.approx(0.975, abs=1e-7)
    assert eval_quantile(Uniform(0, 1), 0.7) == pytest.approx(0.7)
    assert eval_quantile(Empirical([1, 2, 3, 4]), 0.5) == 2
    assert eval_quantile(Normal(0, 1), 0.975) == pytest.approx(1.959964, abs=1e-6)


def test_against_scipy():
    x = np.linspace(-3, 3, 61)
    assert np.allclose(Normal(1, 2).cdf(x), stats.norm.cdf(x, 1, 2), atol=1e-13)
    assert np.allclose(Logistic(0.5, 0.7).cdf(x), stats.logistic.cdf(x, 0.5, 0.7), atol=1e-13)
    u = np.linspace(0, 1, 41)
    assert np.allclose(Beta(2.5, 0.8).cdf(u), stats.beta.cdf(u, 2.5, 0.8), atol=1e-11)
    p = np.linspace(0.01, 0.99, 41)
    assert np.allclose(Beta(2.5, 0.8).quantile(p), stats.beta.ppf(p, 2.5, 0.8), atol=1e-9)
    assert np.allclose(Logistic(0.5, 0.7).quantile(p), stats.logistic.ppf(p, 0.5, 0.7), atol=1e-12)


@pytest.mark.parametrize("model", MODELS, ids=lambda m: type(m).__name__)
def test_quantile_then_cdf(model):
    p = np.linspace(0.001, 0.999, 200)
    back = np.asarray(model.cdf(model.quantile(p)))
    assert np.all(back >= p - 1e-9)
    assert np.max(np.abs(back - p)) < 1e-9


def test_empirical_quantile_is_left_continuous_inverse():
    e = Empirical([3.0, 1.0, 2.0, 4.0])
    assert e.quantile(0.25) == 1.0
    assert e.quantile(0.2500001) == 2.0
    assert e.quantile(1.0) == 4.0
    p = np.linspace(0.01, 1, 100)
    assert np.all(np.asarray(e.cdf(e.quantile(p))) >= p)


def test_mixture_cdf_is_weighted_sum(rng):
    left, right = Normal(0, 1), Logistic(2, 0.5)
    m = Mixture(0.3, left, right)
    x = rng.normal(0, 3, 1000)
    assert np.array_equal(m.cdf(x), 0.3 * left.cdf(x) + 0.7 * right.cdf(x))


def test_sampling_follows_law(rng):
    for model in (Normal(1, 2), Beta(1, 1.6), Mixture(0.9, Normal(0, 1), Normal(3, 1)), Logistic(0, 1)):
        x = model.sample(20000, rng)
        ks = stats.kstest(x, lambda v: np.asarray(model.cdf(v))).statistic
        assert ks < 0.015


def test_piecewise_linear():
    f = PiecewiseLinearCdf([0, 1, 2], [0, 0.25, 1])
    assert f.cdf(0.5) == pytest.approx(0.125)
    assert f.quantile(0.625) == pytest.approx(1.5)
    assert f.cdf(-1) == 0.0 and f.cdf(5) == 1.0


@pytest.mark.parametrize("bad", [
    lambda: Normal(0, 0), lambda: Uniform(1, 1), lambda: Beta(-1, 2), lambda: Logistic(0, -1),
    lambda: Mixture(1.5, Normal(), Normal()),
    lambda: PiecewiseLinearCdf([0, 0, 1], [0, 0.5, 1]), lambda: PiecewiseLinearCdf([0, 1], [0.1, 1]),
    lambda: QuantileSpec(0.6),
])
def test_invalid_parameters(bad):
    with pytest.raises(ParameterError):
        bad()


def test_quantile_domain():
    with pytest.raises(DomainError):
        Normal().quantile(1.2)


def test_empty_empirical():
    with pytest.raises(InputError):
        Empirical([])
