import numpy as np
import pytest
from hypothesis import strategies as st

from spline_QI.knotcalc import KnotWindow


def window_from_steps(steps, degree, start=0., offset=0):
    knots = start + np.concatenate([[0.], np.cumsum(steps)])
    return KnotWindow(knots, degree, offset)


def random_window(degree, n=24, r=2., seed=0):
    rng = np.random.default_rng(seed)
    steps = np.exp(rng.uniform(-np.log(r), np.log(r), size=n))
    return window_from_steps(steps, degree)


def step_lists(min_size=12, max_size=24):
    """Strictly positive steps with bounded mesh ratio."""
    return st.lists(st.floats(min_value=0.25, max_value=4.,
                              allow_nan=False, allow_infinity=False),
                    min_size=min_size, max_size=max_size)


@pytest.fixture
def uniform():
    def make(degree, n=20, h=1.):
        return window_from_steps(np.full(n, h), degree)
    return make


@pytest.fixture
def nonuniform():
    def make(degree, n=24, r=2., seed=0):
        return random_window(degree, n, r, seed)
    return make
