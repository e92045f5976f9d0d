"""
Exception hierarchy for the Contractive Inequality Lab

Every error raised on purpose by the lab derives from LabError so the CLI can
map it to an exit code in one place.
"""

from typing import Optional


class LabError(Exception):
    """Base class for all lab errors"""


class DomainError(LabError, ValueError):
    """A parameter lies outside the domain of the operation (alpha < 1, |w| >= 1, ...)"""


class PreconditionError(LabError, ValueError):
    """An input violates a documented precondition (e.g. f is not normalized)"""


class BracketError(LabError, ValueError):
    """The function does not change sign on the supplied bracket"""


class FormatError(LabError, ValueError):
    """A polynomial or report file could not be parsed"""


class SelfCheckError(LabError, ArithmeticError):
    """Two independent routes to the same quantity disagreed beyond tolerance"""


class QuadratureConvergenceError(LabError, RuntimeError):
    """
    Adaptive quadrature did not reach its tolerance.

    Carries the best estimate found so callers can still report it.
    """

    def __init__(self, message: str, estimate: Optional[float] = None, error: Optional[float] = None):
        super().__init__(message)
        self.estimate = estimate
        self.error = error
