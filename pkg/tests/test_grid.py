import numpy as np
import pytest

from curvedlattice import Grid2D


def test_site_counts_validated():
    with pytest.raises(ValueError):
        Grid2D(1, 8, 1.0)
    with pytest.raises(ValueError):
        Grid2D(8, 1, 1.0)
    with pytest.raises(ValueError):
        Grid2D(8, 8, 0.0)
    with pytest.raises(ValueError):
        Grid2D(8, 8, 1.0, "twisted")


def test_periodic_needs_three_sites():
    with pytest.raises(ValueError):
        Grid2D(2, 8, 1.0, "periodic")
    Grid2D(3, 3, 1.0, "periodic")


def test_coordinates_follow_origin():
    g = Grid2D(4, 3, 0.5, origin=(1.0, -2.0))
    assert np.allclose(g.x_coords(), [1.0, 1.5, 2.0, 2.5])
    assert np.allclose(g.y_coords(), [-2.0, -1.5, -1.0])
    x, y = g.site_xy()
    assert x.shape == (4, 3)
    assert x[2, 0] == 2.0 and y[0, 2] == -1.0


def test_centered_grid_is_symmetric():
    g = Grid2D.centered(9, 9, 0.25)
    x = g.x_coords()
    assert x[0] == -x[-1]
    assert x[4] == 0.0
    assert g.bounding_radius() == pytest.approx(np.hypot(1.0, 1.0))


def test_link_shapes():
    g = Grid2D(5, 4, 1.0)
    assert g.x_link_shape() == (4, 4)
    assert g.y_link_shape() == (5, 3)
    assert g.diag_link_shape() == (4, 3)
    gp = Grid2D(5, 4, 1.0, "periodic")
    assert gp.x_link_shape() == (5, 4)
    assert gp.y_link_shape() == (5, 4)
    assert gp.diag_link_shape() == (5, 4)


def test_link_midpoints_sit_between_sites():
    g = Grid2D.centered(5, 5, 1.0)
    xm, ym = g.x_link_midpoints()
    assert xm[0, 0] == -1.5 and ym[0, 0] == -2.0
    xd, yd = g.diag_link_midpoints()
    assert xd[0, 0] == -1.5 and yd[0, 0] == -1.5


def test_header_round_trip():
    g = Grid2D(6, 7, 0.125, "periodic", (0.5, -0.25))
    assert Grid2D.from_header(g.to_header()) == g


def test_site_index_row_major():
    g = Grid2D(4, 3, 1.0)
    assert g.site_index(0, 0) == 0
    assert g.site_index(1, 0) == 3
    assert g.site_index(3, 2) == 11
