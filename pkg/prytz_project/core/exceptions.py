"""
Exception hierarchy shared by every simulator app.

The management command maps these onto exit codes, so library code raises
them instead of printing or exiting.
"""


class PrytzError(Exception):
    """Base class for all simulator errors."""


class DomainError(PrytzError, ValueError):
    """A curve parameter outside [0, T]."""


class PreconditionError(PrytzError, ValueError):
    """An operation called on input it is not defined for (e.g. an open curve)."""


class DegenerateRegionError(PreconditionError):
    """A region whose signed area is numerically zero."""


class GeometryError(PrytzError, ValueError):
    """A curve that cannot be built from the given parameters."""


class NumericError(PrytzError, ArithmeticError):
    """Non-finite values met while integrating."""


class ConvergenceError(PrytzError):
    """
    An iteration ran out of budget.

    `best` holds the best result reached so far so callers can still report it.
    """

    def __init__(self, message, best=None):
        super().__init__(message)
        self.best = best
