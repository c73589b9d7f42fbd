"""Goldie-Smith type tail-index estimators at the unit root and the long-memory test.

For coefficients ``a_i`` in (0, 1) with ``P(a > 1 - x) ~ kappa x**beta`` the
estimator is

    beta_N = K / sum_{a_i > 1 - delta} ln(delta / (1 - a_i)),   K = #{a_i > 1 - delta}.

The noisy variant applies the same functional to estimated coefficients
capped at ``1 - delta**r``.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np
from scipy import special

from .acf import truncate_estimate
from .errors import (DegenerateDenominatorError, EstimationError, NoExceedancesError,
                     ParameterError)

__all__ = [
    "EstimateResult",
    "TestResult",
    "normal_quantile",
    "tail_index_gs",
    "tail_index_noisy",
    "confidence_interval",
    "long_memory_test",
    "integral_form",
]

EXACT = "exact"
NOISY = "noisy"


@dataclass(frozen=True)
class EstimateResult:
    beta_hat: float
    exceedances: int
    delta: float
    r: float | None
    method: str

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class TestResult:
    z_stat: float
    omega: float
    critical: float
    reject_h0: bool

    __test__ = False  # not a pytest class

    def to_dict(self) -> dict:
        return asdict(self)


def normal_quantile(p: float) -> float:
    if not 0.0 < p < 1.0:
        raise ParameterError(f"probability must lie in (0, 1), got {p}")
    return float(special.ndtri(p))


def _check_delta(delta: float) -> None:
    if not 0.0 < delta < 1.0:
        raise ParameterError(f"delta must lie in (0, 1), got {delta}")


def _goldie_smith(dist: np.ndarray, delta: float) -> tuple[float, int]:
    """Estimator from the distances ``1 - a`` of the exceedances to the unit root."""
    k = int(dist.size)
    if k == 0:
        raise NoExceedancesError(f"no observation exceeds 1 - delta = {1.0 - delta}")
    with np.errstate(divide="ignore"):
        denom = float(np.sum(np.log(delta / dist)))
    if not (denom > 0.0 and math.isfinite(denom)):
        raise DegenerateDenominatorError(f"summed log-excesses equal {denom}")
    return k / denom, k


def tail_index_gs(coeffs, delta: float) -> EstimateResult:
    """Tail index from exactly observed coefficients (strict exceedances of ``1 - delta``)."""
    _check_delta(delta)
    x = np.asarray(coeffs, dtype=float).ravel()
    if np.any(x >= 1.0):
        raise ParameterError("exact coefficients must be < 1")
    beta_hat, k = _goldie_smith(1.0 - x[x > 1.0 - delta], delta)
    return EstimateResult(beta_hat=beta_hat, exceedances=k, delta=float(delta), r=None,
                          method=EXACT)


def tail_index_noisy(a_hats, delta: float, r: float) -> EstimateResult:
    """Tail index from estimated coefficients truncated at ``1 - delta**r``.

    Since every truncated value is at most ``1 - delta**r``, each log term is
    bounded by ``(r - 1) ln(1/delta)`` and the estimate by
    ``1 / ((r - 1) ln(1/delta))`` from below.
    """
    _check_delta(delta)
    a = np.asarray(a_hats, dtype=float).ravel()
    tilde = np.atleast_1d(truncate_estimate(a, delta, r))
    # 1 - a_tilde taken as max(1 - a_hat, delta**r): the cap itself may round to 1.0
    dist = np.maximum(1.0 - a[tilde > 1.0 - delta], delta ** r)
    beta_hat, k = _goldie_smith(dist, delta)
    return EstimateResult(beta_hat=beta_hat, exceedances=k, delta=float(delta), r=float(r),
                          method=NOISY)


def integral_form(coeffs, delta: float, lower: float = 0.0) -> float:
    """Estimator written through the empirical tail ``S(x) = 1 - G_N(1 - x)``.

    Returns ``S(delta) / int_lower^delta S(x) dx / x`` evaluated by exact
    integration of the step function ``S`` between its jump points.  With
    ``lower = 0`` this is the exact-coefficient estimator; with
    ``lower = delta**r`` it is the noisy one.  On ``[delta**r, delta]`` the
    tails of truncated and raw noisy values coincide, so either may be passed.
    """
    _check_delta(delta)
    x = np.asarray(coeffs, dtype=float).ravel()
    n = x.size
    # jump points of S inside (0, delta); mass below `lower` never enters the integral
    dist = np.sort(np.maximum(1.0 - x[x > 1.0 - delta], lower))
    k = dist.size
    if k == 0:
        raise NoExceedancesError("empirical tail vanishes on (0, delta)")
    # On [dist[j], dist[j+1]) the tail count is j + 1.
    lo = dist
    hi = np.append(dist[1:], delta)
    counts = np.arange(1, k + 1)
    integral = float(np.sum(counts * (np.log(hi) - np.log(lo)))) / n
    return (k / n) / integral


def _plain_k(est: EstimateResult) -> int:
    k = int(est.exceedances)
    if k < 1:
        raise EstimationError("need at least one exceedance")
    return k


def confidence_interval(est: EstimateResult, level: float = 0.95) -> tuple[float, float]:
    """Self-normalised interval ``beta_hat -/+ z * beta_hat / sqrt(K)``."""
    if not 0.0 <= level < 1.0:
        raise ParameterError(f"level must lie in [0, 1), got {level}")
    k = _plain_k(est)
    if level == 0.0:
        return est.beta_hat, est.beta_hat
    half = normal_quantile((1.0 + level) / 2.0) * est.beta_hat / math.sqrt(k)
    return est.beta_hat - half, est.beta_hat + half


def long_memory_test(est: EstimateResult, omega: float = 0.05) -> TestResult:
    """One-sided test of ``H0: beta >= 2`` against long memory ``beta < 2``.

    Rejects when ``sqrt(K) (beta_hat - 2) / beta_hat`` falls below the
    ``omega``-quantile of the standard normal law.
    """
    if not 0.0 < omega < 1.0:
        raise ParameterError(f"omega must lie in (0, 1), got {omega}")
    k = _plain_k(est)
    if not est.beta_hat > 0:
        raise EstimationError("beta_hat must be positive")
    z = math.sqrt(k) * (est.beta_hat - 2.0) / est.beta_hat
    crit = normal_quantile(omega)
    return TestResult(z_stat=z, omega=float(omega), critical=crit, reject_h0=bool(z < crit))
