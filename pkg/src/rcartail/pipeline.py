"""End-to-end estimation from a panel (or from known coefficients)."""
from __future__ import annotations

import numpy as np

from .acf import lag1_autocorr_panel
from .model import Panel
from .tailest import EstimateResult, tail_index_gs, tail_index_noisy
from .threshold import ThresholdChoice, adaptive_delta

__all__ = ["panel_coefficients", "estimate_noisy", "estimate_exact"]


def panel_coefficients(panel) -> np.ndarray:
    """Lag-1 autocorrelation of every series of a :class:`Panel` or N x T array."""
    values = panel.values if isinstance(panel, Panel) else panel
    return lag1_autocorr_panel(values)


def estimate_noisy(a_hats, *, epsilon: float = 0.9, r: float = 10.0,
                   delta: float | None = None) -> tuple[EstimateResult, ThresholdChoice | None]:
    """Noisy estimator with an adaptive threshold unless ``delta`` is given."""
    choice = None
    if delta is None:
        choice = adaptive_delta(a_hats, epsilon)
        delta = choice.delta
    return tail_index_noisy(a_hats, delta, r), choice


def estimate_exact(coeffs, *, epsilon: float = 0.9,
                   delta: float | None = None) -> tuple[EstimateResult, ThresholdChoice | None]:
    choice = None
    if delta is None:
        choice = adaptive_delta(coeffs, epsilon)
        delta = choice.delta
    return tail_index_gs(coeffs, delta), choice
