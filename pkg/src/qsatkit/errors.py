"""Exception types shared across the package."""


class QsatError(Exception):
    """Base class for all package errors."""


class InvalidParametersError(QsatError, ValueError):
    """Arguments violate a documented precondition."""


class ResourceLimitError(QsatError):
    """A configurable size/time budget was exceeded.

    Carries optional diagnostics about how far the computation got.
    """

    def __init__(self, message, **diagnostics):
        super().__init__(message)
        self.diagnostics = diagnostics


class DegenerateInstanceError(QsatError):
    """A probability-zero degeneracy was hit (e.g. a transfer matrix
    annihilated its input, or a matched variable lost its linear term).
    Names the offending clause where known."""

    def __init__(self, message, clause=None):
        super().__init__(message)
        self.clause = clause


class PathFailureError(QsatError):
    """Homotopy path tracking failed before reaching t = 1."""

    def __init__(self, message, t_reached=0.0):
        super().__init__(message)
        self.t_reached = t_reached


class NotZeroDimensionalError(QsatError):
    """The ideal has a positive-dimensional solution set, so complete
    enumeration of solutions is impossible."""
