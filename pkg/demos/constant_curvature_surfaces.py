"""Curved surfaces from a trapped lattice: the conformal trap family.

The trap family ds^2 = (dx^2 + dy^2) / (1 + a r^2 + b r^4) produces, for
special coefficient choices, surfaces of constant positive curvature
(a = 2 sqrt(b), a sphere), constant negative curvature (a = -2 sqrt(b),
a hyperbolic plane), an asymptotically flat bump (b = 0), and a compact
case (a = 0).  This script samples each family on a lattice, computes the
numeric curvature map and geodesic distance field, and checks them
against the closed forms.
"""

import os

import numpy as np

from curvedlattice import (
    ConformalFamily,
    Grid2D,
    curvature_family,
    curvature_numeric,
    family_to_metric,
    geodesic_map,
    radial_distance,
    write_site_field_csv,
)

OUT = os.path.join(os.path.dirname(__file__), "output")
os.makedirs(OUT, exist_ok=True)

CASES = {
    "sphere": ConformalFamily(2.0, 1.0),              # K = +4 everywhere
    "hyperbolic": ConformalFamily(-2.0, 1.0),         # K = -4 inside the unit disc
    "asymptotically-flat": ConformalFamily(1.0, 0.0),  # K = 2/(1+r^2)
    "compact": ConformalFamily(0.0, 1.0),             # K = 8r^2/(1+r^4)
}

# the hyperbolic family degenerates at r = 1: its grid must stay inside
DOMAINS = {"sphere": 2.0, "hyperbolic": 0.625, "asymptotically-flat": 2.0, "compact": 2.0}

for name, family in CASES.items():
    half = DOMAINS[name]
    n = 129
    grid = Grid2D.centered(n, n, 2 * half / (n - 1))
    metric = family_to_metric(family, grid)

    k = curvature_numeric(metric)
    center = (n - 1) // 2
    x, y = grid.site_xy()
    exact = curvature_family(family, np.hypot(x, y))
    err = np.nanmax(np.abs(k - exact))
    print(f"{name:>20}: K(0) = {curvature_family(family, 0.0):+.3f}, "
          f"max |K_numeric - K_closed| = {err:.2e}")
    write_site_field_csv(os.path.join(OUT, f"curvature_{name}.csv"), grid, k)

    u = geodesic_map(metric, source=(center, center))
    write_site_field_csv(os.path.join(OUT, f"distance_{name}.csv"), grid, u)

# proper distances along a ray: the sphere reaches r = infinity at finite
# length (it closes up), the hyperbolic plane diverges already at r = 1
sphere, hyper = CASES["sphere"], CASES["hyperbolic"]
print("\nproper radial distance from the origin:")
for r in (0.5, 1.0, 2.0, 10.0, 100.0):
    print(f"  sphere     r = {r:>6}: {radial_distance(sphere, r):.4f}"
          f"   (arctan(r) = {np.arctan(r):.4f})")
for r in (0.5, 0.9, 0.99, 0.999):
    print(f"  hyperbolic r = {r:>6}: {radial_distance(hyper, r):.4f}"
          f"   (artanh(r) = {np.arctanh(r):.4f})")

try:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, axes = plt.subplots(2, 4, figsize=(16, 7))
    for col, (name, family) in enumerate(CASES.items()):
        half = DOMAINS[name]
        n = 129
        grid = Grid2D.centered(n, n, 2 * half / (n - 1))
        metric = family_to_metric(family, grid)
        k = curvature_numeric(metric)
        u = geodesic_map(metric, source=((n - 1) // 2, (n - 1) // 2))
        extent = (-half, half, -half, half)
        im = axes[0, col].imshow(k.T, origin="lower", extent=extent)
        axes[0, col].set_title(f"{name}: curvature")
        fig.colorbar(im, ax=axes[0, col], shrink=0.8)
        cs = axes[1, col].contour(grid.x_coords(), grid.y_coords(), u.T, 12)
        axes[1, col].clabel(cs, inline=True, fontsize=6)
        axes[1, col].set_title("geodesic circles")
        axes[1, col].set_aspect("equal")
    fig.tight_layout()
    fig.savefig(os.path.join(OUT, "constant_curvature_surfaces.png"), dpi=120)
    print(f"\nfigure written to {OUT}/constant_curvature_surfaces.png")
except ImportError:
    print("\nmatplotlib not installed; skipped the figure")
