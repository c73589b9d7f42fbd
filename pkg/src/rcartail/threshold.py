"""Data-driven threshold selection for the unit-root tail-index estimators.

Works on ``Y_i = 1 / (1 - a_i)``, which is heavy tailed with index ``beta``.
Second-order parameters ``(rho, B)`` are estimated from log-excesses of the
top order statistics of ``Y``; they give the AMSE-optimal number of upper
order statistics ``k*``, of which only ``floor(k***epsilon)`` are used.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np

from .errors import (DegeneracyError, NumericError, ParameterError, SampleSizeError,
                     ThresholdError)

__all__ = [
    "SecondOrderFit",
    "ThresholdChoice",
    "rho_path",
    "estimate_second_order",
    "k_star",
    "sample_fraction",
    "delta_from_order_stat",
    "adaptive_delta",
    "delta_star",
]

MIN_SAMPLE = 100
RHO_CLAMP = (-5.0, -0.01)
K_LOWER = 5.0
K_RANGE_EXPONENTS = (0.90, 0.995)


@dataclass(frozen=True)
class SecondOrderFit:
    rho_hat: float
    b_hat: float
    tau_choice: int
    k_rho: int
    n: int
    excluded: int = 0  # inputs >= 1 left out of the Y-transform

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class ThresholdChoice:
    delta: float
    k_star: float
    epsilon: float
    used_order_stat_index: int  # 1-based index n - m in the ascending order statistics
    m: int
    fit: SecondOrderFit | None = None

    def to_dict(self) -> dict:
        d = asdict(self)
        d["fit"] = self.fit.to_dict() if self.fit is not None else None
        return d


def _log_y_desc(coeffs) -> tuple[np.ndarray, int]:
    x = np.asarray(coeffs, dtype=float).ravel()
    ok = x < 1.0
    # ln Y = -ln(1 - a), sorted from the largest down
    logy = -np.log1p(-x[ok])
    logy = np.sort(logy, kind="stable")[::-1]
    return logy, int(x.size - ok.sum())


def _moments(logy: np.ndarray, ks: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """M_j(k) = mean_{i<=k} (L_i - L_{k+1})**j for j = 1, 2, 3, all ``k`` in ``ks``.

    ``L`` is the descending array of log order statistics.  Powers are
    expanded around a fixed centre so cumulative sums serve every ``k``.
    """
    centre = logy[ks.max()]
    z = logy - centre
    c1 = np.cumsum(z)
    c2 = np.cumsum(z * z)
    c3 = np.cumsum(z * z * z)
    s1, s2, s3 = c1[ks - 1], c2[ks - 1], c3[ks - 1]
    t = z[ks]  # threshold L_{k+1} relative to the centre
    k = ks.astype(float)
    m1 = s1 / k - t
    m2 = (s2 - 2.0 * t * s1) / k + t * t
    m3 = (s3 - 3.0 * t * s2 + 3.0 * t * t * s1) / k - t ** 3
    return m1, m2, m3


def _rho_from_moments(m1, m2, m3, tau: int) -> np.ndarray:
    with np.errstate(divide="ignore", invalid="ignore"):
        if tau == 0:
            num = np.log(m1) - 0.5 * np.log(m2 / 2.0)
            den = 0.5 * np.log(m2 / 2.0) - np.log(m3 / 6.0) / 3.0
        else:
            num = m1 ** tau - (m2 / 2.0) ** (tau / 2.0)
            den = (m2 / 2.0) ** (tau / 2.0) - (m3 / 6.0) ** (tau / 3.0)
        t = num / den
        return -np.abs(3.0 * (t - 1.0) / (t - 3.0))


def _k_range(n: int) -> np.ndarray:
    lo = int(math.floor(n ** K_RANGE_EXPONENTS[0]))
    hi = int(math.floor(n ** K_RANGE_EXPONENTS[1]))
    hi = min(hi, n - 1)
    lo = max(1, min(lo, hi))
    return np.arange(lo, hi + 1)


def rho_path(coeffs, tau: int) -> tuple[np.ndarray, np.ndarray]:
    """``(k, rho_tau(k))`` over the stability range ``[n**0.90, n**0.995]``."""
    logy, _ = _log_y_desc(coeffs)
    ks = _k_range(logy.size)
    m1, m2, m3 = _moments(logy, ks)
    return ks, _rho_from_moments(m1, m2, m3, tau)


def _b_hat(logy: np.ndarray, k: int, rho: float) -> float:
    n = logy.size
    i = np.arange(1, k + 1, dtype=float)
    u = i * (logy[:k] - logy[1:k + 1])  # scaled log-spacings
    w = i / k

    def d(s):
        return np.mean(w ** (-s))

    def D(s):
        return np.mean(w ** (-s) * u)

    dr = d(rho)
    num = dr * D(0.0) - D(rho)
    den = dr * D(rho) - D(2.0 * rho)
    if den == 0.0 or not math.isfinite(num / den):
        raise DegeneracyError("second-order scale estimate is undefined")
    return (k / n) ** rho * num / den


def estimate_second_order(coeffs) -> SecondOrderFit:
    """Estimate ``(rho, B)`` from the upper order statistics of ``1 / (1 - a)``.

    ``rho`` comes from the third-moment-ratio statistic with tuning
    ``tau in {0, 1}``, the tuning being the one whose path over
    ``k in [n**0.90, n**0.995]`` is least dispersed around its median (ties
    go to ``tau = 0``); it is read off at ``k = floor(n**0.995)`` and clamped
    to ``[-5, -0.01]``.  ``B`` uses scaled log-spacings at the same ``k``.
    """
    logy, excluded = _log_y_desc(coeffs)
    n = logy.size
    if n < MIN_SAMPLE:
        raise SampleSizeError(f"need at least {MIN_SAMPLE} values below 1, got {n}")
    ks = _k_range(n)
    if np.unique(logy).size <= ks[-1]:
        raise DegeneracyError("too few distinct values for second-order estimation")
    m1, m2, m3 = _moments(logy, ks)
    if np.any(m1 <= 0) or np.any(m2 <= 0) or np.any(m3 <= 0):
        raise DegeneracyError("log-excess moments are degenerate")

    best = None
    for tau in (0, 1):
        path = _rho_from_moments(m1, m2, m3, tau)
        if not np.all(np.isfinite(path)):
            continue
        crit = float(np.sum((path - np.median(path)) ** 2))
        if best is None or crit < best[0]:
            best = (crit, tau, path)
    if best is None:
        raise DegeneracyError("rho estimate is not finite for either tuning")
    _, tau, path = best
    rho = float(np.clip(path[-1], *RHO_CLAMP))
    k_rho = int(ks[-1])
    b = _b_hat(logy, k_rho, rho)
    if b == 0.0:
        raise DegeneracyError("second-order scale estimate is zero")
    return SecondOrderFit(rho_hat=rho, b_hat=float(b), tau_choice=tau, k_rho=k_rho, n=n,
                          excluded=excluded)


def k_star(n: int, fit: SecondOrderFit) -> float:
    """AMSE-optimal number of upper order statistics.

    ``((1 - rho) n**-rho / (|B| sqrt(-2 rho)))**(2 / (1 - 2 rho))``; only
    ``B**2`` enters the underlying mean squared error, hence ``|B|``.
    """
    rho, b = fit.rho_hat, fit.b_hat
    if not rho < 0:
        raise ParameterError(f"rho_hat must be negative, got {rho}")
    if b == 0:
        raise ParameterError("b_hat must be nonzero")
    try:
        base = (1.0 - rho) * float(n) ** (-rho) / (abs(b) * math.sqrt(-2.0 * rho))
        val = base ** (2.0 / (1.0 - 2.0 * rho))
    except (OverflowError, ZeroDivisionError):
        val = math.inf
    if not math.isfinite(val) or val <= 0:
        raise NumericError(f"k* is not finite (rho={rho}, B={b})")
    return val


def sample_fraction(k: float, epsilon: float, n: int) -> int:
    """``floor(k**epsilon)`` clamped to ``[1, n - 1]``."""
    m = int(math.floor(k ** epsilon))
    return min(max(m, 1), n - 1)


def delta_from_order_stat(coeffs, m: int) -> tuple[float, int]:
    """``delta = 1 - x_(n-m)``: one minus the (m+1)-th largest input."""
    x = np.sort(np.asarray(coeffs, dtype=float).ravel(), kind="stable")
    n = x.size
    if not 1 <= m <= n - 1:
        raise ParameterError(f"m must lie in [1, {n - 1}], got {m}")
    delta = 1.0 - float(x[n - m - 1])
    if not 0.0 < delta < 1.0:
        raise ThresholdError(f"threshold delta = {delta} outside (0, 1)")
    return delta, n - m


def adaptive_delta(coeffs, epsilon: float) -> ThresholdChoice:
    """Threshold from the estimated optimal sample fraction raised to ``epsilon``.

    ``k*`` is clamped to ``[5, n/2]`` before taking ``m = floor(k***epsilon)``.
    """
    if not 0.0 < epsilon < 1.0:
        raise ParameterError(f"epsilon must lie in (0, 1), got {epsilon}")
    x = np.asarray(coeffs, dtype=float).ravel()
    n = x.size
    if n < MIN_SAMPLE:
        raise SampleSizeError(f"need at least {MIN_SAMPLE} values, got {n}")
    fit = estimate_second_order(x)
    ks = min(max(k_star(fit.n, fit), K_LOWER), n / 2.0)
    m = sample_fraction(ks, epsilon, n)
    delta, idx = delta_from_order_stat(x, m)
    return ThresholdChoice(delta=delta, k_star=ks, epsilon=float(epsilon),
                           used_order_stat_index=idx, m=m, fit=fit)


def delta_star(beta: float, nu: float, tau: float, kappa: float, n: int) -> float:
    """AMSE-optimal threshold ``(beta (beta+nu)**2 / (2 tau**2 nu**3 kappa n))**(1/(beta+2 nu))``."""
    if not beta > 1:
        raise ParameterError(f"beta must exceed 1, got {beta}")
    if not nu > 0 or not kappa > 0 or not n >= 1:
        raise ParameterError("nu, kappa and n must be positive")
    if tau == 0:
        raise ParameterError("tau = 0 leaves the optimal threshold undefined")
    return (beta * (beta + nu) ** 2 / (2.0 * tau * tau * nu ** 3 * kappa * n)) ** (1.0 / (beta + 2.0 * nu))
