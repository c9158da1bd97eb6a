"""Single source of working precision.

Every numeric routine reads the decimal precision ``P`` from mpmath's global
context, so one call to :func:`set_precision` (or the :func:`precision`
context manager) configures the whole package.
"""
from contextlib import contextmanager

import mpmath as mp

DEFAULT_PRECISION = 60
MIN_PRECISION = 30


def set_precision(digits: int = DEFAULT_PRECISION) -> None:
    if digits < MIN_PRECISION:
        raise ValueError(f"precision must be >= {MIN_PRECISION} digits, got {digits}")
    mp.mp.dps = digits


def current_precision() -> int:
    return mp.mp.dps


@contextmanager
def precision(digits: int):
    if digits < MIN_PRECISION:
        raise ValueError(f"precision must be >= {MIN_PRECISION} digits, got {digits}")
    with mp.workdps(digits):
        yield digits


def tol(k: int, digits: int | None = None):
    """Return ``10**(k - P)`` at the current (or given) precision."""
    p = mp.mp.dps if digits is None else digits
    return mp.mpf(10) ** (k - p)


set_precision(DEFAULT_PRECISION)
