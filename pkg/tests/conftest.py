import numpy as np
import pytest

from surrocast import MonthlyPanel, SurrogatePanel, month_range


def build_panels(y, ys, z=None, x=None, start="2019-01"):
    """Panel pair from plain arrays, with consecutive month labels."""
    y = np.asarray(y, dtype=float)
    T = y.shape[0]
    times = month_range(start, T)
    z = np.zeros((T, 0)) if z is None else np.asarray(z, dtype=float)
    x = np.zeros((T, 0)) if x is None else np.asarray(x, dtype=float)
    mp = MonthlyPanel(times=times, y=y, z=z, x=x)
    sp = SurrogatePanel(times=times, ys=np.asarray(ys, dtype=float))
    return mp, sp


@pytest.fixture
def rng():
    return np.random.default_rng(20260810)
