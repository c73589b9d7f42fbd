"""Tail-index estimation and long-memory testing for panel random-coefficient AR(1) data."""
from .acf import lag1_autocorr, lag1_autocorr_panel, truncate_estimate
from .errors import (DegeneracyError, DegenerateDenominatorError, DegenerateSeriesError,
                     EstimationError, NoExceedancesError, NumericError, ParameterError,
                     RcarError, SampleSizeError, SpecError, ThresholdError)
from .mc import ExperimentReport, ExperimentSpec, Scenario, noise_probe, run_experiment
from .model import (CoefficientLaw, InnovationSpec, Panel, PanelConfig, aggregate_panel,
                    sample_coefficients, simulate_panel, simulate_series)
from .pipeline import estimate_exact, estimate_noisy, panel_coefficients
from .tailest import (EstimateResult, TestResult, confidence_interval, long_memory_test,
                      tail_index_gs, tail_index_noisy)
from .theory import (TailConstants, autocovariance, beta_model_constants, rate_planner,
                     spectral_density)
from .threshold import (SecondOrderFit, ThresholdChoice, adaptive_delta, delta_star,
                        estimate_second_order, k_star)

__version__ = "0.1.0"
