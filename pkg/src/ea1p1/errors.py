"""Exception taxonomy shared by all modules."""

from __future__ import annotations


class Ea1p1Error(Exception):
    """Base class for every error raised by this package."""


class DomainError(Ea1p1Error, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class EvaluationError(Ea1p1Error):
    """An objective returned a non-finite value.

    Carries the offending abscissa in ``abscissa``.
    """

    def __init__(self, message: str, abscissa: float):
        super().__init__(message)
        self.abscissa = abscissa


class AccuracyError(Ea1p1Error):
    """Quadrature could not reach the requested tolerance.

    ``achieved_tol`` reports the error estimate that was actually reached,
    ``estimate`` the best available value of the integral.
    """

    def __init__(self, message: str, achieved_tol: float, estimate: float):
        super().__init__(message)
        self.achieved_tol = achieved_tol
        self.estimate = estimate


class InfeasiblePointError(Ea1p1Error, ValueError):
    """A point lies outside the feasible domain of the problem."""


class InconsistentStateError(Ea1p1Error, ValueError):
    """Inputs that must describe the same configuration disagree."""


class UnsupportedProblemError(Ea1p1Error, ValueError):
    """The requested estimator is not defined for this problem/target mix."""


class FitRangeError(Ea1p1Error, ValueError):
    """A fitted decay base fell outside the open interval (0, 1).

    ``fitted`` carries the out-of-range value.
    """

    def __init__(self, message: str, fitted: float):
        super().__init__(message)
        self.fitted = fitted
