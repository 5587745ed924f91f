import hypothesis
import numpy as np
import pytest

from curveclust.curves import normalize, refit_on_grid
from curveclust.splines import uniform_grid

hypothesis.settings.register_profile(
    "curveclust", max_examples=25, deadline=None
)
hypothesis.settings.load_profile("curveclust")


@pytest.fixture(scope="session")
def grid500():
    return uniform_grid(500)


@pytest.fixture(scope="session")
def grid200():
    return uniform_grid(200)


@pytest.fixture(scope="session")
def grid100():
    return uniform_grid(100)


def sine_shape(t):
    return np.sin(2.5 * np.pi * t)


def bump_shape(t):
    return (-(t**2) + np.sin(2 * np.pi * t) + 0.25) / 1.3


def random_smooth_curve(curve_id, grid, rng, n_modes=4):
    """A normalized random smooth curve in the shape-spline space."""
    t = grid.points
    y = sum(
        rng.normal(0.0, 1.0 / (m + 1)) * np.sin(m * np.pi * t + rng.uniform(0, 2 * np.pi))
        for m in range(1, n_modes + 1)
    )
    return normalize(refit_on_grid(curve_id, grid, y))
