"""Exception hierarchy shared by all modules."""


class RcarError(Exception):
    """Base class for package errors."""


class ParameterError(RcarError, ValueError):
    """An argument lies outside its admissible range."""


class DegenerateSeriesError(RcarError):
    """A series has (numerically) zero sample variance."""


class EstimationError(RcarError):
    """Base class for failures of an estimator on a particular sample."""


class NoExceedancesError(EstimationError):
    """No observation exceeds the threshold 1 - delta."""


class DegenerateDenominatorError(EstimationError):
    """The summed log-excesses vanish."""


class DegeneracyError(EstimationError):
    """Log-excess moments are degenerate (e.g. all values tied)."""


class SampleSizeError(EstimationError):
    """Too few observations for the requested procedure."""


class ThresholdError(EstimationError):
    """Adaptive threshold fell outside (0, 1)."""


class NumericError(RcarError, ArithmeticError):
    """A closed form or quadrature produced a non-finite or inaccurate value."""


class SpecError(RcarError, ValueError):
    """Invalid experiment specification."""
