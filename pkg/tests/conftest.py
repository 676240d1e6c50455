from fractions import Fraction

import numpy as np
import pytest
from hypothesis import settings
from hypothesis import strategies as st

from sgauge.geometry import Q, affine_rank

settings.register_profile("sgauge", max_examples=60, deadline=None)
settings.load_profile("sgauge")


def rationals(bound=8):
    return st.builds(lambda p, q: Q(Fraction(p, q)), st.integers(-bound, bound), st.integers(1, bound))


def points(n, bound=8):
    return st.tuples(*[rationals(bound)] * n)


def grid_points(rng, n, count, bound=8):
    out = []
    for _ in range(count):
        out.append(tuple(Q(int(rng.integers(-bound, bound + 1))) / int(rng.integers(1, bound + 1)) for _ in range(n)))
    return out


def full_dim_points(rng, n, count, bound=8):
    while True:
        pts = list(dict.fromkeys(grid_points(rng, n, count, bound)))
        if affine_rank(pts) == n:
            return pts


@pytest.fixture
def rng():
    return np.random.default_rng(20261016)
