"""High-precision expansions of theta, Hermite and Laguerre series in the critical strip."""

from .config import DEFAULT_PRECISION, precision, set_precision, tol
from .errors import (
    ConfigError,
    ConvergenceError,
    DomainError,
    FunctionalEquationViolation,
    PoleError,
    PrecisionError,
    RootFindingError,
)

__version__ = "0.1.0"

__all__ = [
    "DEFAULT_PRECISION",
    "precision",
    "set_precision",
    "tol",
    "ConfigError",
    "ConvergenceError",
    "DomainError",
    "FunctionalEquationViolation",
    "PoleError",
    "PrecisionError",
    "RootFindingError",
]
