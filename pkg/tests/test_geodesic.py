import numpy as np
import pytest

from curvedlattice import (
    ConformalFamily,
    DiagonalMetric,
    Grid2D,
    dijkstra_map,
    family_to_metric,
    geodesic_map,
    radial_distance,
)
from oracles import quadrature_radial_distance


def test_source_value_and_monotonicity():
    g = Grid2D.centered(21, 21, 0.5)
    u = geodesic_map(DiagonalMetric.flat(g), source=(10, 10))
    assert u[10, 10] == 0.0
    assert np.all(u >= 0.0)
    assert np.all(np.isfinite(u))


def test_flat_distance_near_source():
    # target (3,4) cells away: Euclidean distance 5 cells
    g = Grid2D.centered(41, 41, 0.25)
    u = geodesic_map(DiagonalMetric.flat(g), source=(20, 20))
    assert abs(u[23, 24] - 5 * 0.25) < 0.1 * 0.25


def test_sphere_family_distance_matches_quadrature():
    fam = ConformalFamily(2.0, 1.0)
    # oracle: integral of (1+r^2)^-1 from 0 to 1 -> pi/4
    assert quadrature_radial_distance(fam.omega, 1.0) == pytest.approx(np.pi / 4, rel=1e-10)
    g = Grid2D.centered(157, 157, 1 / 64)
    u = geodesic_map(family_to_metric(fam, g), source=(78, 78))
    assert u[78 + 64, 78] == pytest.approx(np.pi / 4, rel=1e-2)


def test_hyperbolic_family_distance_matches_quadrature():
    fam = ConformalFamily(-2.0, 1.0)
    assert quadrature_radial_distance(fam.omega, 0.5) == pytest.approx(0.5493061443340549, rel=1e-10)
    g = Grid2D.centered(79, 79, 1 / 64)
    u = geodesic_map(family_to_metric(fam, g), source=(39, 39))
    assert u[39 + 32, 39] == pytest.approx(0.5493061443340549, rel=1e-2)


def test_axis_distance_agrees_with_radial_distance():
    fam = ConformalFamily(1.0, 0.0)
    g = Grid2D.centered(97, 97, 1 / 32)
    u = geodesic_map(family_to_metric(fam, g), source=(48, 48))
    for cells in (16, 32, 48):
        r = cells / 32
        assert u[48 + cells, 48] == pytest.approx(radial_distance(fam, r), rel=1e-2)


def test_triangle_inequality_on_sampled_triples(rng):
    from conftest import smooth_random_metric

    g = Grid2D.centered(25, 25, 0.25)
    m = smooth_random_metric(g, rng)
    sources = [(4, 6), (12, 12), (20, 9)]
    maps = {s: geodesic_map(m, source=s) for s in sources}
    a, b, c = sources
    slack = 3 * g.spacing
    assert maps[a][b] <= maps[a][c] + maps[c][b] + slack
    # and against every site as intermediate target
    assert np.all(maps[a] <= maps[b] + maps[b][a] + slack)


def test_rotation_invariance_exact():
    g = Grid2D.centered(65, 65, 1 / 32)
    m = family_to_metric(ConformalFamily(1.0, 0.5), g)
    u = geodesic_map(m, source=(32, 32))
    assert np.array_equal(u, np.rot90(u))


def test_first_order_convergence_off_axis():
    fam = ConformalFamily(2.0, 1.0)
    exact = np.arctan(np.hypot(0.75, 0.5))  # rotationally symmetric metric
    errs = []
    for n, ell in ((81, 1 / 32), (161, 1 / 64)):
        g = Grid2D.centered(n, n, ell)
        u = geodesic_map(family_to_metric(fam, g), source=((n - 1) // 2, (n - 1) // 2))
        c = (n - 1) // 2
        errs.append(abs(u[c + int(0.75 / ell), c + int(0.5 / ell)] - exact))
    assert errs[1] < errs[0] / 1.3


def test_periodic_wraparound():
    g = Grid2D(16, 16, 1.0, "periodic")
    u = geodesic_map(DiagonalMetric.flat(g), source=(0, 0))
    assert u[15, 0] == pytest.approx(1.0, abs=1e-9)
    assert u[8, 0] == pytest.approx(8.0, abs=1e-6)


def test_source_must_be_inside():
    g = Grid2D(8, 8, 1.0)
    with pytest.raises(ValueError):
        geodesic_map(DiagonalMetric.flat(g), source=(8, 0))


def test_dijkstra_manhattan_bias():
    g = Grid2D.centered(21, 21, 0.5)
    m = DiagonalMetric.flat(g)
    d = dijkstra_map(m, source=(10, 10))
    u = geodesic_map(m, source=(10, 10))
    # graph distance to (3,4) cells away is the Manhattan 7 cells, not 5
    assert d[13, 14] == pytest.approx(7 * 0.5, rel=1e-12)
    assert np.all(d >= u - 1e-9)
