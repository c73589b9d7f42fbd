import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, strategies as st

from rcartail import theory
from rcartail.errors import ParameterError
from rcartail.model import CoefficientLaw, sample_coefficients
from rcartail.rng import stream

mp.mp.dps = 40


def mp_density(alpha, beta):
    norm = 2 / mp.beta(alpha, beta)
    return lambda x: norm * x ** (2 * alpha - 1) * (1 - x * x) ** (beta - 1)


# ---------------------------------------------------------------- constants

def test_constants_reference_values():
    k = theory.beta_model_constants(1.5, 2.5)
    oracle = mp.mpf(2) ** 2.5 / (2.5 * mp.beta(1.5, 2.5))
    assert k.kappa == pytest.approx(float(oracle), rel=1e-13)
    assert k.kappa == pytest.approx(11.524, abs=5e-4)
    assert k.nu == 1.0
    assert k.rho == pytest.approx(-0.4, abs=1e-15)
    assert k.tau == pytest.approx(-(2 + 0.75) * 2.5 / 3.5, rel=1e-14)
    assert k.tau == pytest.approx(-1.9643, abs=1e-4)


@pytest.mark.parametrize("alpha,beta", [(1.5, 2.5), (0.75, 1.25), (2.5, 1.5), (0.3, 4.0)])
def test_tau_against_high_precision_tail(alpha, beta):
    # P(a > 1 - x) = kappa x^beta (1 + tau x + O(x^2)); Richardson on two small x
    k = theory.beta_model_constants(alpha, beta)
    g = mp_density(alpha, beta)

    def ratio(x):
        p = mp.quad(g, [1 - x, 1])
        return (p / (k.kappa * x ** beta) - 1) / x

    x = mp.mpf("1e-4")
    est = 2 * ratio(x) - ratio(2 * x)  # removes the O(x) term of the ratio
    assert float(est) == pytest.approx(k.tau, rel=1e-5, abs=1e-6)


def test_excluded_parameterisation():
    with pytest.raises(ParameterError):
        theory.beta_model_constants(0.25, 2.0)


@pytest.mark.parametrize("alpha,beta", [(0.0, 2.0), (1.0, 1.0), (1.0, 0.5), (-1.0, 2.0)])
def test_constants_reject_invalid_law(alpha, beta):
    with pytest.raises(ParameterError):
        theory.beta_model_constants(alpha, beta)


@given(st.floats(0.05, 5.0), st.floats(1.01, 6.0))
def test_constant_identities(alpha, beta):
    if abs(4 * alpha + beta - 3) < 1e-6:
        return
    k = theory.beta_model_constants(alpha, beta)
    assert k.rho == pytest.approx(-k.nu / beta, rel=1e-14)
    assert k.b_const == pytest.approx((k.nu / beta) * k.kappa ** (-k.nu / beta) * k.tau, rel=1e-12)
    assert k.g1 == pytest.approx(k.kappa * beta, rel=1e-14)
    assert k.kappa > 0 and k.rho < 0
    assert k.memory_parameter == pytest.approx(1 - beta / 2)


@pytest.mark.slow
def test_tail_probability_monte_carlo():
    alpha, beta, x, n = 1.5, 2.5, 0.01, 10 ** 7
    k = theory.beta_model_constants(alpha, beta)
    a = sample_coefficients(CoefficientLaw(alpha, beta), n, stream(11, 0))
    p_hat = np.mean(a > 1 - x)
    p = k.kappa * x ** beta * (1 + k.tau * x)
    se = math.sqrt(p * (1 - p) / n)
    assert abs(p_hat - p) < 3 * se


# ---------------------------------------------------------------- autocovariance

def test_autocovariance_reference_values():
    assert theory.autocovariance(1.5, 2.5, 0) == pytest.approx(2.0, abs=1e-12)
    assert theory.autocovariance(1.5, 2.5, 2) == pytest.approx(1.0, abs=1e-12)


@pytest.mark.parametrize("alpha,beta,t", [(1.5, 2.5, 1), (0.75, 1.25, 3), (2.0, 1.5, 10), (0.5, 3.0, 7)])
def test_autocovariance_quadrature_oracle(alpha, beta, t):
    g = mp_density(alpha, beta)
    oracle = mp.quad(lambda x: x ** t / (1 - x * x) * g(x), [0, 0.5, 0.99, 1])
    assert theory.autocovariance(alpha, beta, t) == pytest.approx(float(oracle), rel=1e-9)


@pytest.mark.parametrize("alpha,beta", [(1.5, 2.5), (0.75, 1.25), (3.0, 1.8)])
def test_autocovariance_recurrence(alpha, beta):
    t = np.arange(51)
    g = theory.autocovariance(alpha, beta, t)
    g2 = theory.autocovariance(alpha, beta, t + 2)
    np.testing.assert_allclose(g2 / g, (alpha + t / 2) / (alpha + beta - 1 + t / 2), rtol=1e-12)


def test_autocovariance_symmetric_and_decreasing():
    t = np.arange(30)
    g = theory.autocovariance(1.0, 1.7, t)
    assert np.all(np.diff(g) < 0)
    assert theory.autocovariance(1.0, 1.7, -4) == theory.autocovariance(1.0, 1.7, 4)


@pytest.mark.parametrize("alpha,beta", [(1.5, 2.5), (0.75, 1.5), (1.0, 1.25), (2.0, 3.0)])
def test_autocovariance_large_lag_constant(alpha, beta):
    t = 1e6
    c = theory.autocovariance_tail_constant(alpha, beta)
    k = theory.beta_model_constants(alpha, beta)
    assert c == pytest.approx(k.kappa * beta * math.gamma(beta - 1) / 2)
    assert theory.autocovariance(alpha, beta, t) * t ** (beta - 1) == pytest.approx(c, rel=0.01)


def test_autocovariance_requires_beta_above_one():
    with pytest.raises(ParameterError):
        theory.autocovariance(1.0, 1.0, 0)


# ---------------------------------------------------------------- spectral density

@given(st.floats(0.01, math.pi))
def test_spectral_density_even(lam):
    assert theory.spectral_density(1.5, 2.5, lam) == theory.spectral_density(1.5, 2.5, -lam)


@pytest.mark.parametrize("alpha,beta", [(1.5, 2.5), (0.75, 1.25), (0.3, 2.0)])
def test_spectral_density_at_pi_bounds(alpha, beta):
    f = theory.spectral_density(alpha, beta, math.pi)
    assert 1 / (8 * math.pi) < f < 1 / (2 * math.pi)


def test_spectral_density_at_zero_matches_inverse_moment():
    alpha = beta = 2.5
    g = mp_density(alpha, beta)
    oracle = mp.quad(lambda x: g(x) / (1 - x) ** 2, [0, 0.5, 0.99, 1]) / (2 * mp.pi)
    assert theory.spectral_density(alpha, beta, 0.0) == pytest.approx(float(oracle), rel=1e-6)
    assert theory.spectral_constant(alpha, beta) == pytest.approx(float(oracle), rel=1e-6)


@pytest.mark.parametrize("lam", [0.05, 0.7, 2.0])
def test_spectral_density_quadrature_oracle(lam):
    alpha, beta = 0.75, 1.25
    g = mp_density(alpha, beta)
    oracle = mp.quad(lambda x: g(x) / (1 - 2 * x * mp.cos(lam) + x * x),
                     sorted({0, 0.5, max(1 - lam, 0.5), 0.999, 1})) / (2 * mp.pi)
    assert theory.spectral_density(alpha, beta, lam) == pytest.approx(float(oracle), rel=1e-7)


@pytest.mark.parametrize("alpha,beta", [(1.5, 2.5), (0.75, 1.25), (1.0, 2.0), (2.5, 1.5)])
def test_spectral_mass_identity(alpha, beta):
    from scipy import integrate

    mass, _ = integrate.quad(lambda l: theory.spectral_density(alpha, beta, l), 0.0, math.pi,
                             points=[1e-6, 1e-4, 1e-2], limit=200)
    assert 2 * mass == pytest.approx(theory.autocovariance(alpha, beta, 0), rel=1e-6)


def test_spectral_density_diverges_only_below_two():
    with pytest.raises(ParameterError):
        theory.spectral_density(1.0, 2.0, 0.0)
    with pytest.raises(ParameterError):
        theory.spectral_density(1.0, 1.5, 0.0)
    with pytest.raises(ParameterError):
        theory.spectral_density(1.0, 2.5, 4.0)


@pytest.mark.parametrize("alpha,beta", [(1.0, 1.5), (0.75, 1.25)])
def test_small_frequency_power_law(alpha, beta):
    kf = theory.spectral_constant(alpha, beta)
    lam = 1e-8
    assert theory.spectral_density(alpha, beta, lam) * lam ** (2 - beta) == pytest.approx(kf, rel=1e-3)


def test_boundary_case_log_slope():
    alpha = 1.0
    kf = theory.spectral_constant(alpha, 2.0)
    lam = 1e-6
    slope = (theory.spectral_density(alpha, 2.0, lam / 10) - theory.spectral_density(alpha, 2.0, lam)) / math.log(10)
    assert slope == pytest.approx(kf, rel=1e-4)


def test_spurious_spike_above_two():
    # bounded but large at the origin just above the boundary
    f0 = theory.spectral_density(1.0, 2.1, 0.0)
    assert math.isfinite(f0)
    assert f0 > 10 * theory.spectral_density(1.0, 2.1, 0.5)


# ---------------------------------------------------------------- rate planner

def test_rate_planner_interval():
    plan = theory.rate_planner(1.5)
    lo, hi = plan.b_interval
    assert lo == pytest.approx(0.28571, abs=1e-5)
    assert hi == pytest.approx(0.66667, abs=1e-5)
    assert plan.a_lower_bound is None


def test_rate_planner_bound_infinite_p():
    plan = theory.rate_planner(1.5, b_exp=0.4)
    assert plan.b_admissible
    assert plan.a_lower_bound == pytest.approx(1.2)


def test_rate_planner_boundary_beta():
    for b in (0.26, 0.3, 0.45):
        plan = theory.rate_planner(2.0, b_exp=b)
        assert plan.a_lower_bound == pytest.approx(max((1 + 2 * b) / 2, 1.0))
    assert theory.rate_planner(2.0, b_exp=0.3).a_lower_bound == pytest.approx(1.0)


def test_rate_planner_finite_p_and_flags():
    plan = theory.rate_planner(1.5, p=4.0, b_exp=0.4)
    assert plan.a_lower_bound == pytest.approx(max(0.8, 1.6 / 4 + 0.5 * 0.4 + 1))
    bad = theory.rate_planner(1.5, b_exp=0.9)
    assert bad.b_admissible is False
    assert bad.as_dict()["b"] == 0.9
    with pytest.raises(ParameterError):
        theory.rate_planner(1.0)
