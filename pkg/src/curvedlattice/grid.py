"""Regular 2D lattice grids and the shape conventions for site/link fields.

Arrays are indexed ``[i, j]`` with ``i`` along x and ``j`` along y.  A site
field has shape ``(nx, ny)``.  Link fields are stored per orientation: the
x-link array holds the value on the link from site ``(i, j)`` to
``(i+1, j)`` (the quantity "at i+1/2"), the y-link array the link to
``(i, j+1)``.  Diagonal links live on plaquettes: index ``(i, j)`` is the
plaquette with corners ``(i, j)`` and ``(i+1, j+1)``; the "up" diagonal
joins those two corners, the "down" diagonal joins ``(i, j+1)`` and
``(i+1, j)``.  On open grids the link arrays are one shorter along the
link direction; on periodic grids they wrap and keep the full shape.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = ["Grid2D"]


@dataclass(frozen=True)
class Grid2D:
    """Regular square-lattice grid: site counts, spacing, boundary, origin.

    Site ``(i, j)`` sits at ``origin + (i, j) * spacing``.
    """

    nx: int
    ny: int
    spacing: float
    boundary: str = "open"
    origin: tuple[float, float] = (0.0, 0.0)

    def __post_init__(self):
        if self.nx < 2 or self.ny < 2:
            raise ValueError(f"grid needs nx, ny >= 2, got {self.nx}x{self.ny}")
        if not self.spacing > 0:
            raise ValueError(f"spacing must be positive, got {self.spacing}")
        if self.boundary not in ("open", "periodic"):
            raise ValueError(f"boundary must be 'open' or 'periodic', got {self.boundary!r}")
        if self.boundary == "periodic" and (self.nx < 3 or self.ny < 3):
            raise ValueError("periodic boundary requires nx, ny >= 3")
        object.__setattr__(self, "origin", (float(self.origin[0]), float(self.origin[1])))

    @classmethod
    def centered(cls, nx, ny, spacing, boundary="open"):
        """Grid whose coordinate origin is the geometric center."""
        x0 = -0.5 * (nx - 1) * spacing
        y0 = -0.5 * (ny - 1) * spacing
        return cls(nx, ny, spacing, boundary, (x0, y0))

    # -- basic geometry -------------------------------------------------

    @property
    def periodic(self):
        return self.boundary == "periodic"

    @property
    def nsites(self):
        return self.nx * self.ny

    @property
    def shape(self):
        return (self.nx, self.ny)

    def x_coords(self):
        return self.origin[0] + self.spacing * np.arange(self.nx)

    def y_coords(self):
        return self.origin[1] + self.spacing * np.arange(self.ny)

    def site_xy(self):
        """Coordinate arrays ``X, Y`` of shape ``(nx, ny)``."""
        return np.meshgrid(self.x_coords(), self.y_coords(), indexing="ij")

    def site_index(self, i, j):
        """Flat (row-major) index of site ``(i, j)``."""
        return i * self.ny + j

    def bounding_radius(self):
        """Largest distance from the coordinate origin to any site."""
        x = self.x_coords()
        y = self.y_coords()
        return float(np.hypot(max(abs(x[0]), abs(x[-1])), max(abs(y[0]), abs(y[-1]))))

    # -- link-field shapes and midpoints --------------------------------

    def x_link_shape(self):
        return (self.nx, self.ny) if self.periodic else (self.nx - 1, self.ny)

    def y_link_shape(self):
        return (self.nx, self.ny) if self.periodic else (self.nx, self.ny - 1)

    def diag_link_shape(self):
        return (self.nx, self.ny) if self.periodic else (self.nx - 1, self.ny - 1)

    def x_link_midpoints(self):
        """Coordinates of x-link midpoints, shape ``x_link_shape()``."""
        n = self.nx if self.periodic else self.nx - 1
        x = self.origin[0] + self.spacing * (np.arange(n) + 0.5)
        return np.meshgrid(x, self.y_coords(), indexing="ij")

    def y_link_midpoints(self):
        n = self.ny if self.periodic else self.ny - 1
        y = self.origin[1] + self.spacing * (np.arange(n) + 0.5)
        return np.meshgrid(self.x_coords(), y, indexing="ij")

    def diag_link_midpoints(self):
        """Plaquette centers; both diagonals of a plaquette share a midpoint."""
        nlx, nly = self.diag_link_shape()
        x = self.origin[0] + self.spacing * (np.arange(nlx) + 0.5)
        y = self.origin[1] + self.spacing * (np.arange(nly) + 0.5)
        return np.meshgrid(x, y, indexing="ij")

    # -- serialization ---------------------------------------------------

    def to_header(self):
        return {
            "nx": self.nx,
            "ny": self.ny,
            "spacing": self.spacing,
            "boundary": self.boundary,
            "origin": [self.origin[0], self.origin[1]],
        }

    @classmethod
    def from_header(cls, header):
        return cls(
            int(header["nx"]),
            int(header["ny"]),
            float(header["spacing"]),
            str(header["boundary"]),
            tuple(header["origin"]),
        )
