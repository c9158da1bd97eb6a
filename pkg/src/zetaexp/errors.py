class ZetaExpError(Exception):
    """Base class for errors raised by this package."""


class PoleError(ZetaExpError, ValueError):
    pass


class PrecisionError(ZetaExpError, ValueError):
    """Raised when a requested evaluation lies outside the validated region."""


class ConvergenceError(ZetaExpError, ArithmeticError):
    def __init__(self, message, *, m=None, tolerance=None, achieved=None):
        super().__init__(message)
        self.m = m
        self.tolerance = tolerance
        self.achieved = achieved


class DomainError(ZetaExpError, ValueError):
    pass


class RootFindingError(ZetaExpError, ArithmeticError):
    pass


class FunctionalEquationViolation(ZetaExpError, AssertionError):
    pass


class ConfigError(ZetaExpError, ValueError):
    """Invalid run configuration (command line or config file)."""
