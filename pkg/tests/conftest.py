from fractions import Fraction

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from tropcoh.tropicalize import tropicalize_direct
from tropcoh.valuation import from_padic_points, random_ultrametric

settings.register_profile(
    "default", max_examples=40, deadline=None,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large],
)
settings.load_profile("default")

F = Fraction


@pytest.fixture
def curve01():
    """Tropicalization of the 5-adic points 0, 1: one finite vertex at the origin."""
    return tropicalize_direct(from_padic_points(5, [0, 1]))


@pytest.fixture
def curve015():
    return tropicalize_direct(from_padic_points(5, [0, 1, 5]))


seeds = st.integers(min_value=0, max_value=2**32 - 1)


@st.composite
def ultrametrics(draw, n_max=8):
    """Ultrametric log-distance matrices from two independent sources."""
    if draw(st.booleans()):
        n = draw(st.integers(1, n_max))
        return random_ultrametric(n, draw(seeds))
    p = draw(st.sampled_from([2, 3, 5, 7]))
    pts = draw(st.lists(st.fractions(min_value=-200, max_value=200, max_denominator=50),
                        min_size=1, max_size=n_max, unique=True))
    return from_padic_points(p, pts)
