import numpy as np
import pytest
from scipy.ndimage import gaussian_filter

from curvedlattice import DiagonalMetric, Grid2D


def smooth_random_metric(grid, rng, amplitude=0.5, smoothing=2.0):
    """Random smooth strictly positive diagonal metric on a grid."""
    gxx = np.exp(amplitude * gaussian_filter(rng.standard_normal(grid.x_link_shape()), smoothing))
    gyy = np.exp(amplitude * gaussian_filter(rng.standard_normal(grid.y_link_shape()), smoothing))
    return DiagonalMetric.from_link_values(grid, gxx, gyy)


@pytest.fixture
def rng():
    return np.random.default_rng(20240331)


@pytest.fixture
def small_grid():
    return Grid2D(12, 12, 0.5)
