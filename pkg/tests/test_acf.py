import math

import numpy as np
import pytest
from hypothesis import assume, given, strategies as st
from hypothesis.extra.numpy import arrays

from rcartail.acf import lag1_autocorr, lag1_autocorr_panel, truncate_estimate
from rcartail.errors import DegenerateSeriesError, ParameterError
from rcartail.model import InnovationSpec, simulate_series

finite = st.floats(-1e6, 1e6, allow_nan=False, allow_infinity=False)


def test_alternating_series():
    assert lag1_autocorr([1, -1, 1, -1]) == pytest.approx(-0.75, abs=1e-15)


def test_matches_direct_formula(rng):
    x = rng.standard_normal(37)
    d = x - x.mean()
    assert lag1_autocorr(x) == pytest.approx(np.sum(d[:-1] * d[1:]) / np.sum(d * d), rel=1e-13)


def test_affine_invariance(rng):
    x = rng.standard_normal(500)
    assert lag1_autocorr(3 * x + 7) == pytest.approx(lag1_autocorr(x), abs=1e-12)


@given(arrays(float, st.integers(2, 60), elements=finite),
       st.floats(1e-3, 1e3), st.floats(-1e3, 1e3))
def test_affine_invariance_property(x, scale, shift):
    assume(np.ptp(x) > 1e-3)
    assert lag1_autocorr(scale * x + shift) == pytest.approx(lag1_autocorr(x), abs=1e-9)


@given(arrays(float, st.integers(2, 80), elements=finite))
def test_bounded_by_one(x):
    assume(np.ptp(x) > 0)
    try:
        v = lag1_autocorr(x)
    except DegenerateSeriesError:
        return
    assert -1.0 <= v <= 1.0


def test_simulated_ar1():
    x = simulate_series(0.5, (0.0, 1.0), None, 10 ** 5, InnovationSpec(), np.random.default_rng(3))
    assert lag1_autocorr(x) == pytest.approx(0.5, abs=0.01)


def test_constant_series_is_degenerate():
    with pytest.raises(DegenerateSeriesError):
        lag1_autocorr([2.0, 2.0, 2.0])
    with pytest.raises(DegenerateSeriesError):
        lag1_autocorr_panel(np.array([[1.0, 2.0, 3.0], [5.0, 5.0, 5.0]]))


def test_short_input_rejected():
    with pytest.raises(ParameterError):
        lag1_autocorr([1.0])


def test_panel_matches_rows(rng):
    v = rng.standard_normal((6, 40))
    np.testing.assert_allclose(lag1_autocorr_panel(v), [lag1_autocorr(r) for r in v], rtol=0, atol=0)


def test_near_unit_root_precision():
    # large offset with tiny fluctuations: two-pass centring keeps the answer
    x = simulate_series(0.99, (0.0, 1.0), None, 10 ** 5, InnovationSpec(), np.random.default_rng(4))
    assert lag1_autocorr(x + 1e8) == pytest.approx(lag1_autocorr(x), abs=1e-6)


@pytest.mark.parametrize("a_hat,delta,r,expected", [
    (0.999, 0.1, 2, 0.99),
    (0.5, 0.1, 10, 0.5),
    (1.0, 0.1, 10, 1 - 1e-10),
])
def test_truncation_examples(a_hat, delta, r, expected):
    assert truncate_estimate(a_hat, delta, r) == pytest.approx(expected, abs=1e-15)


@given(st.floats(-1, 2), st.floats(-1, 2), st.floats(1e-3, 0.999), st.floats(1.01, 30))
def test_truncation_monotone_and_capped(x, y, delta, r):
    lo, hi = min(x, y), max(x, y)
    cap = 1 - delta ** r
    assert truncate_estimate(lo, delta, r) <= truncate_estimate(hi, delta, r)
    assert truncate_estimate(hi, delta, r) <= cap


@pytest.mark.parametrize("delta,r", [(0.0, 2), (1.0, 2), (0.1, 1.0), (0.1, 0.5)])
def test_truncation_rejects(delta, r):
    with pytest.raises(ParameterError):
        truncate_estimate(0.5, delta, r)


def test_truncation_vectorised():
    out = truncate_estimate(np.array([0.2, 0.9999, 1.0]), 0.1, 3)
    np.testing.assert_allclose(out, [0.2, 0.999, 0.999])
    assert isinstance(truncate_estimate(0.3, 0.1, 3), float)
