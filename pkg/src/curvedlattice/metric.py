"""Diagonal 2D metrics on lattice links, curvature, and proper distances.

A metric is represented by its inverse components ``g^xx``, ``g^yy`` sampled
at link midpoints (that is where first differences of a field naturally
live) plus the determinant ``det g_ij`` at sites.  Off-diagonal components
are not represented: in two dimensions coordinates can always be chosen
that diagonalize the metric.

The rotationally symmetric one-parameter family

    ds^2 = (dx^2 + dy^2) / (1 + a r^2 + b r^4)

covers the constant-curvature cases (``a = +-2 sqrt(b)``), the
asymptotically flat case (``b = 0``) and the compact case (``a = 0``).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad

from .grid import Grid2D
from .io import write_json

__all__ = [
    "ConformalFamily",
    "DiagonalMetric",
    "family_to_metric",
    "curvature_family",
    "curvature_numeric",
    "radial_distance",
    "metric_to_json",
    "metric_from_json",
    "save_metric_json",
    "load_metric_json",
]


@dataclass(frozen=True)
class ConformalFamily:
    """Conformal factor Omega(r) = 1 + a r^2 + b r^4 of the trap family.

    ``a`` has units 1/length^2, ``b`` units 1/length^4.  The line element is
    ds^2 = Omega(r)^{-1} (dx^2 + dy^2), so the *inverse* metric components
    equal Omega.
    """

    a: float
    b: float

    def omega(self, r):
        r2 = np.square(np.asarray(r, dtype=float))
        return 1.0 + self.a * r2 + self.b * r2 * r2

    def degenerate_radius(self, r_max):
        """Smallest radius in (0, r_max] where Omega <= 0, or None.

        Omega is quadratic in s = r^2; the exact roots decide degeneracy.
        """
        a, b = self.a, self.b
        roots = []
        if b == 0.0:
            if a < 0.0:
                roots.append(-1.0 / a)
        else:
            disc = a * a - 4.0 * b
            if disc >= 0.0:
                sq = math.sqrt(disc)
                for s in ((-a - sq) / (2.0 * b), (-a + sq) / (2.0 * b)):
                    if s > 0.0:
                        roots.append(s)
        s_max = r_max * r_max
        hits = [math.sqrt(s) for s in roots if s <= s_max]
        return min(hits) if hits else None

    def require_positive(self, r_max):
        r_bad = self.degenerate_radius(r_max)
        if r_bad is not None:
            raise ValueError(
                f"conformal factor 1 + a r^2 + b r^4 vanishes at radius r = {r_bad:.6g}"
                f" inside the requested domain (a={self.a}, b={self.b})"
            )


@dataclass(frozen=True)
class DiagonalMetric:
    """Inverse metric on links plus determinant on sites.

    ``gxx_inv`` lives on x-links, ``gyy_inv`` on y-links (see
    :mod:`curvedlattice.grid` for shapes); both must be strictly positive.
    ``det_g`` holds det g_ij per site.
    """

    grid: Grid2D
    gxx_inv: np.ndarray
    gyy_inv: np.ndarray
    det_g: np.ndarray

    def __post_init__(self):
        gxx = np.ascontiguousarray(np.asarray(self.gxx_inv, dtype=float))
        gyy = np.ascontiguousarray(np.asarray(self.gyy_inv, dtype=float))
        det = np.ascontiguousarray(np.asarray(self.det_g, dtype=float))
        if gxx.shape != self.grid.x_link_shape():
            raise ValueError(f"gxx_inv shape {gxx.shape} != {self.grid.x_link_shape()}")
        if gyy.shape != self.grid.y_link_shape():
            raise ValueError(f"gyy_inv shape {gyy.shape} != {self.grid.y_link_shape()}")
        if det.shape != self.grid.shape:
            raise ValueError(f"det_g shape {det.shape} != {self.grid.shape}")
        for name, arr in (("gxx_inv", gxx), ("gyy_inv", gyy), ("det_g", det)):
            if not np.all(np.isfinite(arr)) or np.any(arr <= 0.0):
                raise ValueError(f"{name} must be finite and strictly positive")
        object.__setattr__(self, "gxx_inv", gxx)
        object.__setattr__(self, "gyy_inv", gyy)
        object.__setattr__(self, "det_g", det)

    @classmethod
    def from_link_values(cls, grid, gxx_inv, gyy_inv):
        """Build a metric from link data alone.

        The site determinant is the geometric mean of the adjacent link
        values of 1/(g^xx g^yy): per orientation the two neighboring links
        are combined as sqrt of their product (a single link at an open
        edge stands alone).  This converges to the continuum determinant.
        """
        gxx_inv = np.asarray(gxx_inv, dtype=float)
        gyy_inv = np.asarray(gyy_inv, dtype=float)
        for name, arr in (("gxx_inv", gxx_inv), ("gyy_inv", gyy_inv)):
            if not np.all(np.isfinite(arr)) or np.any(arr <= 0.0):
                raise ValueError(f"{name} must be finite and strictly positive")
        gxx_site = _site_mean_from_x_links(grid, gxx_inv)
        gyy_site = _site_mean_from_y_links(grid, gyy_inv)
        det = 1.0 / (gxx_site * gyy_site)
        return cls(grid, gxx_inv, gyy_inv, det)

    @classmethod
    def flat(cls, grid):
        return cls(
            grid,
            np.ones(grid.x_link_shape()),
            np.ones(grid.y_link_shape()),
            np.ones(grid.shape),
        )


def _site_mean_from_x_links(grid, link):
    """Geometric mean of the x-links adjacent to each site."""
    if grid.periodic:
        return np.sqrt(link * np.roll(link, 1, axis=0))
    out = np.empty(grid.shape)
    out[1:-1, :] = np.sqrt(link[:-1, :] * link[1:, :])
    out[0, :] = link[0, :]
    out[-1, :] = link[-1, :]
    return out


def _site_mean_from_y_links(grid, link):
    if grid.periodic:
        return np.sqrt(link * np.roll(link, 1, axis=1))
    out = np.empty(grid.shape)
    out[:, 1:-1] = np.sqrt(link[:, :-1] * link[:, 1:])
    out[:, 0] = link[:, 0]
    out[:, -1] = link[:, -1]
    return out


# ---------------------------------------------------------------------------
# family -> metric and closed-form diagnostics
# ---------------------------------------------------------------------------

def family_to_metric(family, grid):
    """Sample the conformal family on a grid.

    Inverse-metric link values are Omega evaluated at the link midpoint;
    the site determinant is the exact continuum value Omega(r)^-2.
    Raises ``ValueError`` naming the offending radius if Omega is not
    strictly positive on the grid's bounding disc.
    """
    # corner sites carry the largest radius of any sampled point
    family.require_positive(grid.bounding_radius())
    xm, ym = grid.x_link_midpoints()
    gxx = family.omega(np.hypot(xm, ym))
    xm, ym = grid.y_link_midpoints()
    gyy = family.omega(np.hypot(xm, ym))
    xs, ys = grid.site_xy()
    omega_site = family.omega(np.hypot(xs, ys))
    return DiagonalMetric(grid, gxx, gyy, omega_site ** -2)


def curvature_family(family, r):
    """Gaussian curvature of the family metric at radius ``r``.

    Closed form from K = -e^{-2 sigma} Laplacian(sigma) with
    e^{2 sigma} = Omega^{-1}:

        K(r) = 2 (a + 4 b r^2 + a b r^4) / (1 + a r^2 + b r^4)

    For b = a^2/4 this is the constant a^2 * sign(a); for b = 0 it reduces
    to 2a / (1 + a r^2).
    """
    r = np.asarray(r, dtype=float)
    omega = family.omega(r)
    if np.any(omega <= 0.0):
        raise ValueError("curvature requested where the conformal factor is not positive")
    r2 = np.square(r)
    num = 2.0 * (family.a + 4.0 * family.b * r2 + family.a * family.b * r2 * r2)
    out = num / omega
    return float(out) if out.ndim == 0 else out


def radial_distance(family, r):
    """Proper distance from the origin to coordinate radius ``r``.

    Adaptive quadrature of Omega^{-1/2} along a coordinate ray; strictly
    increasing in ``r``.  Raises if Omega vanishes inside [0, r].
    """
    r = float(r)
    if r < 0:
        raise ValueError("radius must be non-negative")
    family.require_positive(r)
    value, _ = quad(lambda t: family.omega(t) ** -0.5, 0.0, r, limit=200)
    return value


# ---------------------------------------------------------------------------
# finite-difference curvature of a sampled metric
# ---------------------------------------------------------------------------

def curvature_numeric(metric, grid=None):
    """Gaussian curvature of a diagonal metric by centered differences.

    Uses the orthogonal-coordinates formula

        K = -1/(2 sqrt(E G)) [ d/dx ( G_x / sqrt(EG) ) + d/dy ( E_y / sqrt(EG) ) ]

    with E = g_xx, G = g_yy, discretized with the compact staggered stencil
    (differences evaluated on links, divergence back at sites), which is
    second-order accurate.  On open grids the one-cell boundary margin is
    not computed and is returned as NaN; periodic grids have no margin.
    """
    grid = metric.grid if grid is None else grid
    if grid.nx < 5 or grid.ny < 5:
        raise ValueError("curvature_numeric needs at least a 5x5 grid")
    ell = grid.spacing

    # covariant components: on-link values are exact data, site values are
    # geometric means of the adjacent links
    ex_link = 1.0 / metric.gxx_inv
    gy_link = 1.0 / metric.gyy_inv
    e_site = 1.0 / _site_mean_from_x_links(grid, metric.gxx_inv)
    g_site = 1.0 / _site_mean_from_y_links(grid, metric.gyy_inv)

    if grid.periodic:
        g_on_xlink = np.sqrt(g_site * np.roll(g_site, -1, axis=0))
        e_on_ylink = np.sqrt(e_site * np.roll(e_site, -1, axis=1))
        flux_x = (np.roll(g_site, -1, axis=0) - g_site) / ell / np.sqrt(ex_link * g_on_xlink)
        flux_y = (np.roll(e_site, -1, axis=1) - e_site) / ell / np.sqrt(e_on_ylink * gy_link)
        div = (flux_x - np.roll(flux_x, 1, axis=0)) / ell + (flux_y - np.roll(flux_y, 1, axis=1)) / ell
        return -div / (2.0 * np.sqrt(e_site * g_site))

    g_on_xlink = np.sqrt(g_site[:-1, :] * g_site[1:, :])
    e_on_ylink = np.sqrt(e_site[:, :-1] * e_site[:, 1:])
    flux_x = (g_site[1:, :] - g_site[:-1, :]) / ell / np.sqrt(ex_link * g_on_xlink)
    flux_y = (e_site[:, 1:] - e_site[:, :-1]) / ell / np.sqrt(e_on_ylink * gy_link)

    out = np.full(grid.shape, np.nan)
    div = (flux_x[1:, 1:-1] - flux_x[:-1, 1:-1]) / ell + (flux_y[1:-1, 1:] - flux_y[1:-1, :-1]) / ell
    out[1:-1, 1:-1] = -div / (2.0 * np.sqrt(e_site[1:-1, 1:-1] * g_site[1:-1, 1:-1]))
    return out


# ---------------------------------------------------------------------------
# serialization
# ---------------------------------------------------------------------------

def metric_to_json(metric):
    """JSON document: grid header plus row-major link arrays."""
    return {
        "version": 1,
        "grid": metric.grid.to_header(),
        "gxx_inv": metric.gxx_inv.tolist(),
        "gyy_inv": metric.gyy_inv.tolist(),
    }


def metric_from_json(document):
    """Rebuild a metric from its JSON document.

    The document stores link arrays only; the site determinant is
    recomputed with the geometric-mean rule (an O(spacing^2) difference
    from a determinant that was stored exactly at construction).
    """
    grid = Grid2D.from_header(document["grid"])
    return DiagonalMetric.from_link_values(
        grid,
        np.asarray(document["gxx_inv"], dtype=float),
        np.asarray(document["gyy_inv"], dtype=float),
    )


def save_metric_json(path, metric):
    write_json(path, metric_to_json(metric))


def load_metric_json(path):
    import json

    with open(path) as fh:
        return metric_from_json(json.load(fh))
