"""Exception types shared by every module."""


class ParameterError(ValueError):
    """A documented precondition was violated."""


class CapacityError(ValueError):
    """The request exceeds a sieve or runtime guard."""


class QuadratureError(ArithmeticError):
    """Adaptive quadrature failed to reach its tolerance."""

    def __init__(self, message, achieved=None):
        super().__init__(message)
        self.achieved = achieved


class TrendError(AssertionError):
    """An empirical scaling trend guard was violated."""
