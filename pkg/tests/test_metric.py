import json

import numpy as np
import pytest

from curvedlattice import (
    ConformalFamily,
    DiagonalMetric,
    Grid2D,
    curvature_family,
    curvature_numeric,
    family_to_metric,
    metric_from_json,
    metric_to_json,
    radial_distance,
)
from oracles import fd_conformal_curvature, quadrature_radial_distance


# ---------------------------------------------------------------------------
# family sampling
# ---------------------------------------------------------------------------

def test_flat_family_gives_unit_metric():
    g = Grid2D.centered(9, 9, 0.5)
    m = family_to_metric(ConformalFamily(0.0, 0.0), g)
    assert np.all(m.gxx_inv == 1.0)
    assert np.all(m.gyy_inv == 1.0)
    assert np.all(m.det_g == 1.0)


def test_family_link_value_is_midpoint_omega():
    # a=1, b=0, link (0,0)-(1,0) with unit spacing and origin at (0,0):
    # midpoint (0.5, 0), r^2 = 0.25, Omega = 1.25
    g = Grid2D(4, 4, 1.0, origin=(0.0, 0.0))
    m = family_to_metric(ConformalFamily(1.0, 0.0), g)
    assert m.gxx_inv[0, 0] == 1.25


def test_family_det_is_exact_at_sites():
    g = Grid2D(5, 5, 0.25, origin=(0.0, 0.0))
    m = family_to_metric(ConformalFamily(2.0, 1.0), g)
    assert m.det_g[0, 0] == 1.0  # Omega(0) = 1
    r = np.hypot(0.5, 0.25)
    omega = 1.0 + 2.0 * r**2 + r**4
    assert m.det_g[2, 1] == pytest.approx(omega**-2, rel=1e-15)


def test_degenerate_family_rejected_with_radius():
    g = Grid2D.centered(65, 65, 1 / 32)  # reaches r = sqrt(2) > 1
    with pytest.raises(ValueError, match="r = 1"):
        family_to_metric(ConformalFamily(-2.0, 1.0), g)


def test_metric_positivity_enforced():
    g = Grid2D(4, 4, 1.0)
    bad = np.ones(g.x_link_shape())
    bad[0, 0] = -0.5
    with pytest.raises(ValueError):
        DiagonalMetric.from_link_values(g, bad, np.ones(g.y_link_shape()))


def test_det_from_links_geometric_mean_rule():
    g = Grid2D(3, 3, 1.0)
    gxx = np.arange(1.0, 7.0).reshape(2, 3)
    gyy = np.arange(2.0, 8.0).reshape(3, 2)
    m = DiagonalMetric.from_link_values(g, gxx, gyy)
    # interior site (1,1): x-links 2 and 5, y-links 4 and 5
    expected = 1.0 / (np.sqrt(gxx[0, 1] * gxx[1, 1]) * np.sqrt(gyy[1, 0] * gyy[1, 1]))
    assert m.det_g[1, 1] == pytest.approx(expected, rel=1e-15)
    # corner (0,0) uses the single adjacent link per orientation
    assert m.det_g[0, 0] == pytest.approx(1.0 / (gxx[0, 0] * gyy[0, 0]), rel=1e-15)


# ---------------------------------------------------------------------------
# closed-form curvature against the finite-difference oracle
# ---------------------------------------------------------------------------

def test_constant_curvature_cases():
    sphere = ConformalFamily(2.0, 1.0)  # a = 2 sqrt(b)
    for r in (0.0, 0.7, 1.3):
        assert curvature_family(sphere, r) == pytest.approx(4.0, abs=1e-12)
        oracle = fd_conformal_curvature(sphere.omega, r, 0.0)
        assert oracle == pytest.approx(4.0, abs=1e-6)
    hyper = ConformalFamily(-2.0, 1.0)  # a = -2 sqrt(b)
    for r in (0.0, 0.5):
        assert curvature_family(hyper, r) == pytest.approx(-4.0, abs=1e-12)
        assert fd_conformal_curvature(hyper.omega, r, 0.0) == pytest.approx(-4.0, abs=1e-6)


def test_flat_family_curvature_zero():
    assert curvature_family(ConformalFamily(0.0, 0.0), 2.0) == 0.0


def test_asymptotically_flat_special_case():
    # b = 0: K(r) = 2a / (1 + a r^2); at a=1, r=1 this is 1
    fam = ConformalFamily(1.0, 0.0)
    assert curvature_family(fam, 1.0) == pytest.approx(1.0, rel=1e-14)
    r = np.linspace(0.0, 2.0, 9)
    assert np.allclose(curvature_family(fam, r), 2.0 / (1.0 + r**2), rtol=1e-14)


def test_closed_form_matches_fd_oracle_generic_family():
    # includes the a=0 compact case, where the r^2 coefficient in the
    # numerator is 8b (the oracle decides)
    for a, b in ((0.7, 0.3), (0.0, 1.0), (-0.5, 0.5), (1.5, 0.0)):
        fam = ConformalFamily(a, b)
        for r in (0.0, 0.4, 0.9):
            want = fd_conformal_curvature(fam.omega, r, 0.3)
            got = curvature_family(fam, np.hypot(r, 0.3))
            assert got == pytest.approx(want, rel=2e-5, abs=2e-6)


def test_compact_case_coefficient():
    fam = ConformalFamily(0.0, 1.0)
    r = 0.8
    assert curvature_family(fam, r) == pytest.approx(8.0 * r**2 / (1.0 + r**4), rel=1e-14)


def test_curvature_requires_positive_omega():
    with pytest.raises(ValueError):
        curvature_family(ConformalFamily(-2.0, 1.0), 1.0)


# ---------------------------------------------------------------------------
# numeric curvature of sampled metrics
# ---------------------------------------------------------------------------

def test_numeric_curvature_flat_is_zero_with_nan_margin():
    g = Grid2D.centered(9, 9, 0.5)
    k = curvature_numeric(DiagonalMetric.flat(g))
    assert np.all(np.isnan(k[0, :])) and np.all(np.isnan(k[:, -1]))
    assert np.nanmax(np.abs(k)) < 1e-12


def test_numeric_curvature_periodic_has_no_margin():
    g = Grid2D(8, 8, 0.5, "periodic")
    k = curvature_numeric(DiagonalMetric.flat(g))
    assert not np.any(np.isnan(k))
    assert np.max(np.abs(k)) < 1e-12


def test_numeric_curvature_needs_five_sites():
    g = Grid2D(4, 4, 0.5)
    with pytest.raises(ValueError):
        curvature_numeric(DiagonalMetric.flat(g))


def test_numeric_matches_constant_curvature():
    g = Grid2D.centered(129, 129, 1 / 64)
    k = curvature_numeric(family_to_metric(ConformalFamily(2.0, 1.0), g))
    vals = k[~np.isnan(k)]
    assert np.max(np.abs(vals - 4.0)) < 1e-2


def test_numeric_matches_unit_sphere_stereographic():
    # g^xx = g^yy = (1 + r^2/4)^2 is the inverse stereographic factor of
    # the unit sphere; its curvature is 1 (oracle: the sigma-Laplacian of
    # the corresponding conformal exponent)
    def omega(r):
        return (1.0 + np.square(r) / 4.0) ** 2

    assert fd_conformal_curvature(omega, 0.3, 0.1) == pytest.approx(1.0, abs=1e-6)
    g = Grid2D.centered(129, 129, 1 / 64)
    xm, ym = g.x_link_midpoints()
    gxx = omega(np.hypot(xm, ym))
    xm, ym = g.y_link_midpoints()
    gyy = omega(np.hypot(xm, ym))
    k = curvature_numeric(DiagonalMetric.from_link_values(g, gxx, gyy))
    assert np.nanmax(np.abs(k - 1.0)) < 1e-2


def test_numeric_curvature_second_order_convergence():
    fam = ConformalFamily(1.0, 0.2)
    errs = []
    for n, ell in ((33, 1 / 16), (65, 1 / 32)):
        g = Grid2D.centered(n, n, ell)
        k = curvature_numeric(family_to_metric(fam, g))
        x, y = g.site_xy()
        exact = curvature_family(fam, np.hypot(x, y))
        errs.append(np.nanmax(np.abs(k - exact)))
    ratio = errs[0] / errs[1]
    assert 2.5 < ratio < 6.0  # second order: ~4x per halving


def test_numeric_curvature_rotation_invariance():
    g = Grid2D.centered(65, 65, 1 / 32)
    k = curvature_numeric(family_to_metric(ConformalFamily(1.0, 0.5), g))
    assert np.array_equal(k, np.rot90(k), equal_nan=True)


# ---------------------------------------------------------------------------
# radial distances
# ---------------------------------------------------------------------------

def test_radial_distance_flat():
    assert radial_distance(ConformalFamily(0.0, 0.0), 2.0) == pytest.approx(2.0, rel=1e-12)


def test_radial_distance_sphere_quarter_turn():
    fam = ConformalFamily(2.0, 1.0)
    # oracle: adaptive quadrature of (1+r^2)^-1; closed form arctan(1) = pi/4
    oracle = quadrature_radial_distance(fam.omega, 1.0)
    assert oracle == pytest.approx(np.pi / 4, rel=1e-10)
    assert radial_distance(fam, 1.0) == pytest.approx(0.7853981633974483, rel=1e-10)


def test_radial_distance_hyperbolic_diverges():
    fam = ConformalFamily(-2.0, 1.0)
    # closed form artanh(r); grows beyond any bound as r -> 1
    assert radial_distance(fam, 0.5) == pytest.approx(0.5493061443340549, rel=1e-9)
    values = [radial_distance(fam, r) for r in (0.9, 0.99, 0.999, 0.999999)]
    assert all(b > a for a, b in zip(values, values[1:]))
    assert values[-1] > 7.0
    with pytest.raises(ValueError):
        radial_distance(fam, 1.2)


def test_radial_distance_strictly_increasing():
    fam = ConformalFamily(2.0, 1.0)
    rs = np.linspace(0.1, 3.0, 12)
    ds = [radial_distance(fam, r) for r in rs]
    assert all(b > a for a, b in zip(ds, ds[1:]))


# ---------------------------------------------------------------------------
# serialization
# ---------------------------------------------------------------------------

def test_metric_json_round_trip():
    g = Grid2D.centered(33, 17, 1 / 16)
    m = family_to_metric(ConformalFamily(1.0, 0.1), g)
    doc = json.loads(json.dumps(metric_to_json(m)))
    m2 = metric_from_json(doc)
    assert m2.grid == g
    assert np.array_equal(m2.gxx_inv, m.gxx_inv)
    assert np.array_equal(m2.gyy_inv, m.gyy_inv)
    # det is recomputed from links on load: O(spacing^2) from the exact
    # values in the interior (boundary sites are one-sided)
    assert np.allclose(m2.det_g[1:-1, 1:-1], m.det_g[1:-1, 1:-1], rtol=5e-3)
