import mpmath as mp
import pytest

from zetaexp.config import DEFAULT_PRECISION


@pytest.fixture(autouse=True)
def working_precision():
    old = mp.mp.dps
    mp.mp.dps = DEFAULT_PRECISION
    yield
    mp.mp.dps = old


def tol(k, P=None):
    """10^(k - P)."""
    return mp.mpf(10) ** (k - (mp.mp.dps if P is None else P))


def close(a, b, rel):
    a, b = mp.mpmathify(a), mp.mpmathify(b)
    return abs(a - b) <= rel * max(1, abs(b))
