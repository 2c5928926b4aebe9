"""Exception hierarchy shared by all engines."""


class GaussDilError(Exception):
    """Base class for errors raised by this package."""


class DomainError(GaussDilError, ValueError):
    """An argument lies outside the domain of the operation."""


class ShapeError(GaussDilError, ValueError):
    """Point or array dimension does not match the body."""


class BracketError(GaussDilError, ValueError):
    """Root-finder bracket does not contain a sign change."""


class EvaluationError(GaussDilError, ArithmeticError):
    """A function evaluation returned a non-finite value."""


class QuadratureError(GaussDilError, ArithmeticError):
    """Adaptive quadrature did not reach the requested tolerance."""

    def __init__(self, message, *, estimate=None, error=None, intervals=None):
        super().__init__(message)
        self.estimate = estimate
        self.error = error
        self.intervals = intervals


class HypothesisError(GaussDilError, ValueError):
    """A body fails the hypothesis of the inequality being checked."""

    def __init__(self, message, *, measured=None):
        super().__init__(message)
        self.measured = measured


class InfeasibleError(GaussDilError, ValueError):
    """A construction cannot be realised for the given parameters."""

    def __init__(self, message, **diagnostics):
        super().__init__(message)
        self.diagnostics = diagnostics
