"""Dispersion relations, sparse spectra, Bloch bands, and band fits.

The Brillouin zone is [-pi/d, pi/d] per axis with d the site spacing.
Tight-binding reduction extracts the hopping scale from the lowest-band
width as width/4 (exact for a pure nearest-neighbor cosine band).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg as la
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .errors import ConvergenceError
from .io import write_csv

__all__ = [
    "dispersion_flat",
    "effective_mass_fit",
    "lowest_eigenpairs",
    "SupercellModel",
    "BandResult",
    "bloch_bands",
    "dirac_fit",
    "sinusoidal_band",
    "sinusoidal_scan",
    "tunneling_slope",
]

DENSE_CUTOFF = 5000  # dimension below which the deterministic dense solver is used


def dispersion_flat(j, v0, d, px, py=None):
    """Tight-binding dispersion E(p) = V0 - 2J sum_l cos(p_l d)."""
    px = np.asarray(px, dtype=float)
    e = v0 - 2.0 * j * np.cos(px * d)
    if py is not None:
        e = e - 2.0 * j * np.cos(np.asarray(py, dtype=float) * d)
    return float(e) if e.ndim == 0 else e


def effective_mass_fit(p, energies):
    """Effective mass from a quadratic fit E = E0 + p^2 / (2m).

    Needs at least five samples close to the band minimum (|p| d < 0.3
    keeps the quartic band correction below the percent level); for the
    exact cosine band the fit converges to 1/(2 J d^2) as the window
    shrinks.
    """
    p = np.asarray(p, dtype=float)
    energies = np.asarray(energies, dtype=float)
    if p.shape != energies.shape or p.ndim != 1:
        raise ValueError("p and energies must be matching 1D arrays")
    if p.size < 5:
        raise ValueError("effective-mass fit needs at least 5 samples")
    design = np.column_stack([np.ones_like(p), p * p])
    coeffs, _, rank, _ = np.linalg.lstsq(design, energies, rcond=None)
    if rank < 2 or coeffs[1] <= 0.0:
        raise ValueError("degenerate fit window: band samples do not resolve a positive curvature")
    return 1.0 / (2.0 * coeffs[1])


def lowest_eigenpairs(h, k, *, dense_cutoff=DENSE_CUTOFF, seed=0):
    """k smallest eigenvalues (ascending) and eigenvectors of a sparse
    symmetric matrix.

    Below ``dense_cutoff`` sites the spectrum comes from a deterministic
    dense solve; above, from a shift-inverted Lanczos iteration (ARPACK)
    seeded deterministically.  Every returned pair is verified against
    the residual bound ||H v - lambda v|| <= 1e-8 ||H||; failures raise
    :class:`ConvergenceError` with the achieved residuals.  Degenerate
    eigenvalues are returned in nondecreasing order with no canonical
    vector choice.
    """
    n = h.shape[0]
    if not 1 <= k <= n:
        raise ValueError(f"k must be in [1, {n}], got {k}")
    diag = h.diagonal()
    row_abs = np.asarray(abs(h).sum(axis=1)).ravel()
    off = row_abs - np.abs(diag)
    lower = float(np.min(diag - off))
    upper = float(np.max(diag + off))
    norm_bound = max(abs(lower), abs(upper), 1e-300)

    if n <= dense_cutoff or k >= n - 1:
        dense = h.toarray()
        vals, vecs = la.eigh(dense, subset_by_index=(0, k - 1))
    else:
        rng = np.random.default_rng(seed)
        v0 = rng.standard_normal(n)
        sigma = lower - max(1e-8, 0.01 * (upper - lower))
        vals, vecs = spla.eigsh(h.tocsc(), k=k, sigma=sigma, which="LM", v0=v0)
        order = np.argsort(vals)
        vals = vals[order]
        vecs = vecs[:, order]

    residuals = np.linalg.norm(h @ vecs - vecs * vals, axis=0)
    if np.any(residuals > 1e-8 * norm_bound):
        raise ConvergenceError(
            "lowest_eigenpairs",
            f"residual bound 1e-8*|H| violated: {residuals.max():.3e} vs bound "
            f"{1e-8 * norm_bound:.3e}",
            residual=float(residuals.max()),
        )
    return vals, vecs


# ---------------------------------------------------------------------------
# Bloch bands of supercell models
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SupercellModel:
    """Basis sites and hoppings of a periodic cell with S >= 1 sites.

    ``cell`` holds the cell vectors as rows (one row for a chain, two for
    a 2D lattice).  Each hopping is ``(offset, i, j, amplitude)``: couple
    basis site ``i`` of a cell to basis site ``j`` of the cell displaced
    by integer ``offset``.  The list must be closed under reversal
    ((-offset, j, i) present with the same real amplitude) so that every
    Bloch matrix is Hermitian.
    """

    cell: np.ndarray
    onsite: np.ndarray
    hoppings: tuple

    def __post_init__(self):
        cell = np.atleast_2d(np.asarray(self.cell, dtype=float))
        onsite = np.atleast_1d(np.asarray(self.onsite, dtype=float))
        if cell.shape[0] != cell.shape[1] or cell.shape[0] not in (1, 2):
            raise ValueError("cell must be a 1x1 or 2x2 matrix of cell vectors")
        if onsite.size < 1:
            raise ValueError("need at least one basis site")
        hop = []
        for entry in self.hoppings:
            offset, i, j, t = entry
            offset = tuple(int(o) for o in np.atleast_1d(offset))
            if len(offset) != cell.shape[0]:
                raise ValueError(f"offset {offset} does not match cell dimension")
            if not (0 <= i < onsite.size and 0 <= j < onsite.size):
                raise ValueError(f"basis index out of range in hopping {entry}")
            hop.append((offset, int(i), int(j), float(t)))
        table = {(o, i, j): t for (o, i, j, t) in hop}
        for (o, i, j), t in table.items():
            rev = (tuple(-c for c in o), j, i)
            if table.get(rev) != t:
                raise ValueError(
                    f"hopping list is not Hermitian-closed: missing or mismatched reverse of {(o, i, j, t)}"
                )
        object.__setattr__(self, "cell", cell)
        object.__setattr__(self, "onsite", onsite)
        object.__setattr__(self, "hoppings", tuple(hop))

    @property
    def nbasis(self):
        return self.onsite.size

    @property
    def dim(self):
        return self.cell.shape[0]

    def bloch_matrix(self, p):
        """Hermitian S x S matrix H(p) = sum_offsets T e^{i p . R_offset}."""
        p = np.atleast_1d(np.asarray(p, dtype=float))
        s = self.nbasis
        h = np.diag(self.onsite.astype(complex))
        for offset, i, j, t in self.hoppings:
            r = np.asarray(offset, dtype=float) @ self.cell
            h[i, j] += t * np.exp(1j * float(p @ r))
        return h

    # -- stock models ----------------------------------------------------

    @classmethod
    def chain(cls, j, d=1.0, v0=0.0):
        """Single-site chain with nearest-neighbor amplitude -j."""
        hop = (((1,), 0, 0, -j), ((-1,), 0, 0, -j))
        return cls(np.array([[d]]), np.array([v0]), hop)

    @classmethod
    def dimerized_chain(cls, j1, j2, d=1.0, v0=0.0):
        """Two-site cell: -j1 inside the cell, -j2 across the cell boundary."""
        hop = (
            ((0,), 0, 1, -j1),
            ((0,), 1, 0, -j1),
            ((1,), 1, 0, -j2),
            ((-1,), 0, 1, -j2),
        )
        return cls(np.array([[d]]), np.array([v0, v0]), hop)

    @classmethod
    def three_site_chain(cls, j1, j2, j3, onsite=(0.0, 0.0, 0.0), d=1.0):
        """Three-minima cell; a configurable multi-band example."""
        hop = (
            ((0,), 0, 1, -j1),
            ((0,), 1, 0, -j1),
            ((0,), 1, 2, -j2),
            ((0,), 2, 1, -j2),
            ((1,), 2, 0, -j3),
            ((-1,), 0, 2, -j3),
        )
        return cls(np.array([[d]]), np.asarray(onsite, dtype=float), hop)


@dataclass
class BandResult:
    """Energy bands on a quasi-momentum grid, sorted ascending per point."""

    momenta: np.ndarray
    energies: np.ndarray  # shape (npoints, nbands)

    @property
    def nbands(self):
        return self.energies.shape[1]

    def to_csv(self, path):
        p = np.atleast_2d(self.momenta.T).T
        if p.ndim == 1:
            p = p[:, None]
        if p.shape[0] != self.energies.shape[0]:
            raise ValueError("momentum and energy row counts differ")
        header = (["p"] if p.shape[1] == 1 else ["p_x", "p_y"]) + ["band_index", "E"]
        rows = []
        for row in range(p.shape[0]):
            for band in range(self.nbands):
                rows.append([*p[row], band, self.energies[row, band]])
        write_csv(path, header, rows)


def bloch_bands(model, momenta):
    """Diagonalize the Bloch matrix on a momentum grid.

    ``momenta``: array of shape (N,) for chains or (N, 2) for 2D cells.
    Eigenvalues are gauge-independent (basis-site phase conventions drop
    out) and returned ascending per momentum.
    """
    momenta = np.asarray(momenta, dtype=float)
    pts = momenta.reshape(-1, model.dim) if momenta.ndim > 1 else momenta.reshape(-1, 1)
    if pts.shape[1] != model.dim:
        raise ValueError(f"momenta have dimension {pts.shape[1]}, model has {model.dim}")
    energies = np.empty((pts.shape[0], model.nbasis))
    for idx, p in enumerate(pts):
        energies[idx] = la.eigvalsh(model.bloch_matrix(p))
    return BandResult(momenta, energies)


def dirac_fit(momenta, band_lower, band_upper, *, window=None):
    """Effective light cone (c, mc^2) at a band-gap minimum.

    Fits E^2 = (mc^2)^2 + c^2 (p - p*)^2 to the half-splitting of the two
    bands around the gap minimum p*.  ``window`` restricts |p - p*|.  For
    the dimerized chain the fit converges to mc^2 = |J1 - J2| and
    c = d sqrt(J1 J2) as the window shrinks.
    """
    p = np.asarray(momenta, dtype=float)
    gap = np.asarray(band_upper, dtype=float) - np.asarray(band_lower, dtype=float)
    if p.ndim != 1 or gap.shape != p.shape:
        raise ValueError("momenta and band samples must be matching 1D arrays")
    imin = int(np.argmin(gap))
    if imin in (0, p.size - 1):
        raise ValueError("no local gap minimum inside the sampled window")
    p_star = p[imin]
    dp = p - p_star
    half = 0.5 * gap
    if window is not None:
        keep = np.abs(dp) <= window
        dp = dp[keep]
        half = half[keep]
    if dp.size < 3:
        raise ValueError("not enough samples inside the fit window")
    design = np.column_stack([np.ones_like(dp), dp * dp])
    coeffs, _, rank, _ = np.linalg.lstsq(design, half * half, rcond=None)
    if rank < 2 or coeffs[1] <= 0.0:
        raise ValueError("band samples do not resolve a cone around the gap minimum")
    mc2 = float(np.sqrt(max(coeffs[0], 0.0)))
    c = float(np.sqrt(coeffs[1]))
    return c, mc2


# ---------------------------------------------------------------------------
# 1D sinusoidal-potential bands (plane-wave expansion)
# ---------------------------------------------------------------------------

def _sinusoidal_band_energy(v0, q, band_index, n_modes):
    """Band energy at quasi-momentum q (units: recoil energy, wavenumber 1).

    Plane-wave expansion of -u'' + v0 sin^2(x) u = E u.  The coupling
    sin^2 = 1/2 - (e^{2ix} + e^{-2ix})/4 makes the matrix tridiagonal in
    the mode index.
    """
    m = n_modes // 2
    g = 2.0 * np.arange(-m, m + 1)
    diag = (q + g) ** 2 + 0.5 * v0
    off = np.full(2 * m, -0.25 * v0)
    vals = la.eigh_tridiagonal(diag, off, select="i", select_range=(band_index, band_index))[0]
    return float(vals[0])


def sinusoidal_band(v0_over_er, band_index=0, *, n_modes=64):
    """Band edges and tight-binding amplitude of the 1D sinusoidal lattice.

    Works in recoil units (E_R = k^2, lattice constant pi/k): returns
    ``(E_min, E_max, J)`` for the requested band with J = (E_max-E_min)/4.
    Edges sit at zone center and zone edge.  The plane-wave cutoff is
    convergence-checked by doubling; a band-edge shift above 1e-8 raises
    :class:`ConvergenceError`.
    """
    v0 = float(v0_over_er)
    if v0 < 0:
        raise ValueError("the potential depth must be non-negative")
    if n_modes < 64:
        raise ValueError("plane-wave cutoff must be at least 64 modes")
    edges = {}
    for label, q in (("center", 0.0), ("edge", 1.0)):
        coarse = _sinusoidal_band_energy(v0, q, band_index, n_modes)
        fine = _sinusoidal_band_energy(v0, q, band_index, 2 * n_modes)
        if abs(fine - coarse) > 1e-8:
            raise ConvergenceError(
                "sinusoidal_band",
                f"band edge not converged at cutoff {n_modes}",
                residual=abs(fine - coarse),
            )
        edges[label] = fine
    e_min = min(edges.values())
    e_max = max(edges.values())
    return e_min, e_max, (e_max - e_min) / 4.0


def sinusoidal_scan(v0_values, band_index=0, *, n_modes=64):
    """Rows (V0/E_R, E_min, E_max, J/E_R) for a sequence of depths."""
    rows = []
    for v0 in v0_values:
        e_min, e_max, j = sinusoidal_band(v0, band_index, n_modes=n_modes)
        rows.append((float(v0), e_min, e_max, j))
    return rows


def tunneling_slope(v0_values, j_values):
    """Linear-fit slope of ln J against sqrt(V0/E_R)."""
    s = np.sqrt(np.asarray(v0_values, dtype=float))
    lnj = np.log(np.asarray(j_values, dtype=float))
    return float(np.polyfit(s, lnj, 1)[0])
