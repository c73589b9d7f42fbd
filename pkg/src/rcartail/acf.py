"""Per-series lag-1 autocorrelation and truncation of noisy coefficients."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateSeriesError, ParameterError

__all__ = ["NoisyCoefficient", "lag1_autocorr", "lag1_autocorr_panel", "truncate_estimate"]

_DEGENERATE = 1e-300


@dataclass(frozen=True)
class NoisyCoefficient:
    a_hat: float
    series_index: int
    a_tilde: float | None = None


def lag1_autocorr(series) -> float:
    """Sample lag-1 autocorrelation around the sample mean.

    The denominator sums over all ``T`` centred squares, the numerator over
    ``T - 1`` cross products, so the result is bounded by 1 in absolute value.
    """
    x = np.asarray(series, dtype=float)
    if x.ndim != 1 or x.size < 2:
        raise ParameterError("series must be a 1-d array of length >= 2")
    return float(lag1_autocorr_panel(x[None, :])[0])


def lag1_autocorr_panel(values) -> np.ndarray:
    """:func:`lag1_autocorr` applied to every row of an ``N x T`` array."""
    v = np.asarray(values, dtype=float)
    if v.ndim != 2 or v.shape[1] < 2:
        raise ParameterError("expected an N x T array with T >= 2")
    # two-pass: centre first, then accumulate
    d = v - v.mean(axis=1, keepdims=True)
    den = np.einsum("ij,ij->i", d, d)
    bad = np.flatnonzero(den < _DEGENERATE)
    if bad.size:
        raise DegenerateSeriesError(f"constant series at rows {bad[:10].tolist()}")
    num = np.einsum("ij,ij->i", d[:, :-1], d[:, 1:])
    return np.clip(num / den, -1.0, 1.0)


def truncate_estimate(a_hat, delta: float, r: float):
    """``min(a_hat, 1 - delta**r)``; works elementwise on arrays."""
    if not 0.0 < delta < 1.0:
        raise ParameterError(f"delta must lie in (0, 1), got {delta}")
    if not r > 1.0:
        raise ParameterError(f"r must exceed 1, got {r}")
    cap = 1.0 - delta ** r
    out = np.minimum(np.asarray(a_hat, dtype=float), cap)
    return float(out) if out.ndim == 0 else out
