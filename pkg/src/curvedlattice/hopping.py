"""The metric <-> hopping dictionary and the physical hopping generators.

The correspondence is local and exact on the lattice: the hopping
amplitude on a link equals (minus) the inverse-metric component at the
link midpoint over spacing^2, and conversely.  Stronger hopping means
shorter analogue distance across that link.

Sign convention: the single-particle matrix discretizes -Laplacian_g, so
nearest-neighbor amplitudes are negative (T = -g^dd / spacing^2) and
on-site energies positive; the flat lattice then has its band minimum at
quasi-momentum zero with E(0) = 0.  On-site energies are not independent
data: they are the adjacent-link sums fixed by the dictionary.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field

import numpy as np

from .grid import Grid2D
from .io import write_json
from .metric import DiagonalMetric
from .state import WaveState

__all__ = [
    "HoppingModel",
    "Schedule",
    "DepthResult",
    "metric_to_hopping",
    "hopping_to_metric",
    "lab_field_transform",
    "depth_to_J",
    "uniform_hopping",
    "flrw_schedule",
    "FLRWHopping",
    "metric_wave_hopping",
    "MetricWaveHopping",
    "beam_hopping",
    "hopping_to_json",
    "hopping_from_json",
    "save_hopping_json",
    "load_hopping_json",
    "read_hopping_csv",
]

TIGHT_BINDING_VALIDITY = 2.0 / math.pi ** 2  # hopping (recoil units) beyond which exp(-2A) fails


@dataclass(frozen=True)
class HoppingModel:
    """Per-link hopping amplitudes and per-site energies.

    ``t_x``/``t_y`` live on nearest-neighbor links, ``v`` on sites.  The
    optional diagonal arrays live on plaquettes (see grid conventions) and
    exist only in metric-wave scenarios; they are outside the
    nearest-neighbor dictionary and block metric reconstruction.
    All amplitudes are real, so the assembled matrix is symmetric.
    """

    grid: Grid2D
    t_x: np.ndarray
    t_y: np.ndarray
    v: np.ndarray
    t_diag_up: np.ndarray | None = None
    t_diag_down: np.ndarray | None = None

    def __post_init__(self):
        tx = np.ascontiguousarray(np.asarray(self.t_x, dtype=float))
        ty = np.ascontiguousarray(np.asarray(self.t_y, dtype=float))
        v = np.ascontiguousarray(np.asarray(self.v, dtype=float))
        if tx.shape != self.grid.x_link_shape():
            raise ValueError(f"t_x shape {tx.shape} != {self.grid.x_link_shape()}")
        if ty.shape != self.grid.y_link_shape():
            raise ValueError(f"t_y shape {ty.shape} != {self.grid.y_link_shape()}")
        if v.shape != self.grid.shape:
            raise ValueError(f"v shape {v.shape} != {self.grid.shape}")
        arrays = {"t_x": tx, "t_y": ty, "v": v}
        object.__setattr__(self, "t_x", tx)
        object.__setattr__(self, "t_y", ty)
        object.__setattr__(self, "v", v)
        for name in ("t_diag_up", "t_diag_down"):
            arr = getattr(self, name)
            if arr is not None:
                arr = np.ascontiguousarray(np.asarray(arr, dtype=float))
                if arr.shape != self.grid.diag_link_shape():
                    raise ValueError(f"{name} shape {arr.shape} != {self.grid.diag_link_shape()}")
                object.__setattr__(self, name, arr)
                arrays[name] = arr
        for name, arr in arrays.items():
            if not np.all(np.isfinite(arr)):
                raise ValueError(f"{name} must be finite")

    @property
    def has_diagonal(self):
        return self.t_diag_up is not None or self.t_diag_down is not None


# ---------------------------------------------------------------------------
# the dictionary
# ---------------------------------------------------------------------------

def metric_to_hopping(metric, grid=None, mode="exact"):
    """Map a diagonal metric to the hopping model it generates.

    The link amplitude is T = -g^dd(link) / spacing^2.  The on-site energy
    sums the adjacent link values (open boundaries omit absent links):

    * ``mode="paper"``: V_n = sum_d g^dd / spacing^2, the bare dictionary.
    * ``mode="exact"``: each summand is weighted by
      (det_g(neighbor) / det_g(n))^{1/4}.  The assembled matrix is then a
      discrete quadratic form (sum of squared weighted differences) and is
      positive semidefinite by construction; required for second-order
      evolution.

    The two modes differ at O(spacing * |grad det| / det) and coincide for
    constant-determinant metrics.  The flat metric gives |T| = 1/spacing^2
    and V = 4/spacing^2 at interior sites.
    """
    grid = metric.grid if grid is None else grid
    if mode not in ("paper", "exact"):
        raise ValueError(f"mode must be 'paper' or 'exact', got {mode!r}")
    ell2 = grid.spacing ** 2
    t_x = -metric.gxx_inv / ell2
    t_y = -metric.gyy_inv / ell2

    if mode == "paper":
        wxl = wxr = np.ones(grid.x_link_shape())
        wyl = wyr = np.ones(grid.y_link_shape())
    else:
        det = metric.det_g
        if grid.periodic:
            # weight seen from the left/right endpoint of each x-link
            wxl = (np.roll(det, -1, axis=0) / det) ** 0.25
            wxr = (det / np.roll(det, -1, axis=0)) ** 0.25
            wyl = (np.roll(det, -1, axis=1) / det) ** 0.25
            wyr = (det / np.roll(det, -1, axis=1)) ** 0.25
        else:
            wxl = (det[1:, :] / det[:-1, :]) ** 0.25
            wxr = (det[:-1, :] / det[1:, :]) ** 0.25
            wyl = (det[:, 1:] / det[:, :-1]) ** 0.25
            wyr = (det[:, :-1] / det[:, 1:]) ** 0.25

    v = np.zeros(grid.shape)
    gx = metric.gxx_inv / ell2
    gy = metric.gyy_inv / ell2
    if grid.periodic:
        v += gx * wxl + np.roll(gx * wxr, 1, axis=0)
        v += gy * wyl + np.roll(gy * wyr, 1, axis=1)
    else:
        v[:-1, :] += gx * wxl
        v[1:, :] += gx * wxr
        v[:, :-1] += gy * wyl
        v[:, 1:] += gy * wyr
    return HoppingModel(grid, t_x, t_y, v)


def hopping_to_metric(hopping, grid=None):
    """Reconstruct the diagonal metric encoded by a hopping model.

    Inverse of :func:`metric_to_hopping` on the link arrays
    (g^dd = spacing^2 * |T|); on-site energies are ignored because the
    dictionary determines them from the links.  Requires strictly negative
    nearest-neighbor amplitudes and no diagonal links (skew hoppings have
    no diagonal-metric image).
    """
    grid = hopping.grid if grid is None else grid
    if hopping.has_diagonal:
        raise ValueError("hopping model with diagonal links has no diagonal-metric image")
    if np.any(hopping.t_x >= 0.0) or np.any(hopping.t_y >= 0.0):
        raise ValueError(
            "metric reconstruction requires strictly negative nearest-neighbor amplitudes"
        )
    ell2 = grid.spacing ** 2
    return DiagonalMetric.from_link_values(grid, ell2 * np.abs(hopping.t_x), ell2 * np.abs(hopping.t_y))


def lab_field_transform(state, metric, direction):
    """Convert between the geometric field phi and the lab field psi.

    ``to_lab`` multiplies pointwise by det_g^{1/4}, ``to_geom`` divides;
    the composition is the identity and
    sum |psi|^2 = sum sqrt(det_g) |phi|^2 holds to machine precision.
    """
    if state.psi.shape != metric.grid.shape:
        raise ValueError("state and metric live on different grids")
    factor = metric.det_g ** 0.25
    if direction == "to_lab":
        if state.rep != "geometric":
            raise ValueError("to_lab expects a geometric-representation state")
        return WaveState(state.psi * factor, "lab", state.velocity)
    if direction == "to_geom":
        if state.rep != "lab":
            raise ValueError("to_geom expects a lab-representation state")
        return WaveState(state.psi / factor, "geometric", state.velocity)
    raise ValueError(f"direction must be 'to_lab' or 'to_geom', got {direction!r}")


# ---------------------------------------------------------------------------
# schedules
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class Schedule:
    """Time (or retarded-coordinate) dependence of a hopping scenario.

    ``kind`` says what the samples mean: "lattice-depth" for A(t),
    "scale-factor" for a(t) (must stay positive), "wave-profile" for the
    traveling perturbation h(u).  ``form``/``params`` are a closed-form
    descriptor so a schedule can be serialized; "samples" interpolates
    linearly.
    """

    kind: str
    form: str
    params: dict
    domain: tuple[float, float] | None = None

    KINDS = ("lattice-depth", "scale-factor", "wave-profile")

    def __post_init__(self):
        if self.kind not in self.KINDS:
            raise ValueError(f"schedule kind must be one of {self.KINDS}, got {self.kind!r}")

    @classmethod
    def constant(cls, kind, value):
        return cls(kind, "constant", {"value": float(value)})

    @classmethod
    def scale_factor_exponential(cls, rate, amplitude=1.0):
        """a(t) = amplitude * exp(rate * t) (exponential expansion)."""
        return cls("scale-factor", "exponential", {"rate": float(rate), "amplitude": float(amplitude)})

    @classmethod
    def wave_gaussian(cls, amplitude, width, center=0.0):
        """h(u) = amplitude * exp(-((u - center)/width)^2)."""
        return cls(
            "wave-profile",
            "gaussian-pulse",
            {"amplitude": float(amplitude), "width": float(width), "center": float(center)},
        )

    @classmethod
    def from_samples(cls, kind, times, values):
        times = [float(t) for t in times]
        values = [float(v) for v in values]
        if len(times) != len(values) or len(times) < 2:
            raise ValueError("need at least two (time, value) samples")
        return cls(kind, "samples", {"times": times, "values": values}, (times[0], times[-1]))

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        if self.form == "constant":
            out = np.full(t.shape, self.params["value"])
        elif self.form == "exponential":
            out = self.params["amplitude"] * np.exp(self.params["rate"] * t)
        elif self.form == "gaussian-pulse":
            arg = (t - self.params["center"]) / self.params["width"]
            out = self.params["amplitude"] * np.exp(-arg * arg)
        elif self.form == "samples":
            out = np.interp(t, self.params["times"], self.params["values"])
        else:
            raise ValueError(f"unknown schedule form {self.form!r}")
        if self.kind == "scale-factor" and np.any(out <= 0.0):
            raise ValueError("scale factor must stay positive on the evaluated interval")
        return float(out) if out.ndim == 0 else out

    def sup_abs(self):
        """Known bound on |values|, or None when unbounded."""
        if self.form == "constant":
            return abs(self.params["value"])
        if self.form == "gaussian-pulse":
            return abs(self.params["amplitude"])
        if self.form == "samples":
            return max(abs(v) for v in self.params["values"])
        return None

    def descriptor(self):
        doc = {"kind": self.kind, "form": self.form, "params": dict(self.params)}
        if self.domain is not None:
            doc["domain"] = list(self.domain)
        return doc

    @classmethod
    def from_descriptor(cls, doc):
        domain = tuple(doc["domain"]) if "domain" in doc else None
        return cls(doc["kind"], doc["form"], dict(doc["params"]), domain)


# ---------------------------------------------------------------------------
# physical generators
# ---------------------------------------------------------------------------

def depth_to_J(depth, j_ref, depth_ref=0.0):
    """Hopping amplitude implied by a lattice-depth change.

    J(A) = J_ref * exp(-2 (A - A_ref)).  The exponential tunneling law is
    an asymptotic deep-lattice statement; with J in recoil units
    (E_R = k^2) it requires J < 2/pi^2, reported through ``valid``.
    """
    j = j_ref * math.exp(-2.0 * (float(depth) - float(depth_ref)))
    return DepthResult(j, j < TIGHT_BINDING_VALIDITY)


class DepthResult(tuple):
    """(J, valid) pair returned by :func:`depth_to_J`."""

    __slots__ = ()

    def __new__(cls, j, valid):
        return tuple.__new__(cls, (float(j), bool(valid)))

    @property
    def j(self):
        return self[0]

    @property
    def valid(self):
        return self[1]


def uniform_hopping(grid, j):
    """Homogeneous model with amplitude -j on every nearest-neighbor link."""
    if not j > 0:
        raise ValueError(f"hopping scale must be positive, got {j}")
    mag_x = np.full(grid.x_link_shape(), float(j))
    mag_y = np.full(grid.y_link_shape(), float(j))
    v = _adjacent_link_sum(grid, mag_x, mag_y)
    return HoppingModel(grid, -mag_x, -mag_y, v)


@dataclass(frozen=True)
class FLRWHopping:
    """Spatially uniform, time-dependent hopping J(t) = J0 / a(t)^2.

    Reconstructing the metric at any instant gives
    g^xx = g^yy = 1/a(t)^2, i.e. the conformally flat cosmological metric
    ds^2 = a^2(t)(dx^2 + dy^2).  The lattice-depth schedule that realizes
    it is A(t) = A_ref + ln a(t).
    """

    grid: Grid2D
    j0: float
    scale_factor: Schedule

    def __post_init__(self):
        if self.scale_factor.kind != "scale-factor":
            raise ValueError("FLRWHopping needs a scale-factor schedule")
        if not self.j0 > 0:
            raise ValueError("j0 must be positive")

    def j_at(self, t):
        a = self.scale_factor(t)
        return self.j0 / (a * a)

    def depth_at(self, t, depth_ref=0.0):
        return depth_ref + np.log(self.scale_factor(t))

    def hopping_at(self, t):
        return uniform_hopping(self.grid, self.j_at(t))


def flrw_schedule(a_of_t, j0, grid):
    """Build the uniform time-dependent model driven by a scale factor."""
    return FLRWHopping(grid, float(j0), a_of_t)


def metric_wave_hopping(j, profile, grid, t):
    """Instantaneous hopping model of a traveling cross-polarized wave.

    Nearest-neighbor links carry -j; the plaquette diagonals carry
    -j + h(t - (x - y)) on the up diagonal and -j - h(t - (x - y)) on the
    down diagonal, with (x, y) the plaquette center.  The two diagonal
    amplitudes sum to -2j identically (trace-free perturbation).  Requires
    |h| < j so every link stays negative.
    """
    if profile.kind != "wave-profile":
        raise ValueError("metric_wave_hopping needs a wave-profile schedule")
    if not j > 0:
        raise ValueError("hopping scale j must be positive")
    bound = profile.sup_abs()
    if bound is not None and bound >= j:
        raise ValueError(f"wave amplitude {bound} must stay below the hopping scale {j}")
    base = uniform_hopping(grid, j)
    xm, ym = grid.diag_link_midpoints()
    h = np.asarray(profile(t - (xm - ym)))
    if np.any(np.abs(h) >= j):
        raise ValueError("wave profile reaches |h| >= j on the grid")
    return HoppingModel(grid, base.t_x, base.t_y, base.v, -j + h, -j - h)


@dataclass(frozen=True)
class MetricWaveHopping:
    """Time-dependent descriptor for the metric-wave scenario."""

    grid: Grid2D
    j: float
    profile: Schedule

    def hopping_at(self, t):
        return metric_wave_hopping(self.j, self.profile, self.grid, t)


def beam_hopping(j0, a0, alpha, grid):
    """Hopping profile of a lattice built from finite-width beams.

    A beam of Gaussian intensity f(s) = exp(-alpha s^2) modulates the
    depth seen transverse to it, so horizontal links follow
    T = -j0 exp(-2 a0 sqrt(f(y))) and vertical links
    T = -j0 exp(-2 a0 sqrt(f(x))): the model is anisotropic, with the
    reconstructed g^xx depending on y and g^yy on x.  ``a0 = 1`` is the
    reference depth amplitude.
    """
    if not alpha > 0:
        raise ValueError("alpha must be positive")
    if not j0 > 0:
        raise ValueError("j0 must be positive")
    _, ym = grid.x_link_midpoints()
    t_x = -j0 * np.exp(-2.0 * a0 * np.sqrt(np.exp(-alpha * ym * ym)))
    xm, _ = grid.y_link_midpoints()
    t_y = -j0 * np.exp(-2.0 * a0 * np.sqrt(np.exp(-alpha * xm * xm)))
    v = _adjacent_link_sum(grid, -t_x, -t_y)
    return HoppingModel(grid, t_x, t_y, v)


def _adjacent_link_sum(grid, mag_x, mag_y):
    """Paper-mode on-site energies: sum of |T| over adjacent links."""
    v = np.zeros(grid.shape)
    if grid.periodic:
        v += mag_x + np.roll(mag_x, 1, axis=0)
        v += mag_y + np.roll(mag_y, 1, axis=1)
    else:
        v[:-1, :] += mag_x
        v[1:, :] += mag_x
        v[:, :-1] += mag_y
        v[:, 1:] += mag_y
    return v


# ---------------------------------------------------------------------------
# serialization
# ---------------------------------------------------------------------------

def hopping_to_json(hopping, schedule=None):
    doc = {
        "version": 1,
        "grid": hopping.grid.to_header(),
        "T_x": hopping.t_x.tolist(),
        "T_y": hopping.t_y.tolist(),
        "V": hopping.v.tolist(),
    }
    if hopping.t_diag_up is not None:
        doc["T_diag_up"] = hopping.t_diag_up.tolist()
    if hopping.t_diag_down is not None:
        doc["T_diag_down"] = hopping.t_diag_down.tolist()
    if schedule is not None:
        doc["schedule"] = schedule.descriptor()
    return doc


def hopping_from_json(document):
    grid = Grid2D.from_header(document["grid"])
    kwargs = {}
    if "T_diag_up" in document:
        kwargs["t_diag_up"] = np.asarray(document["T_diag_up"], dtype=float)
    if "T_diag_down" in document:
        kwargs["t_diag_down"] = np.asarray(document["T_diag_down"], dtype=float)
    model = HoppingModel(
        grid,
        np.asarray(document["T_x"], dtype=float),
        np.asarray(document["T_y"], dtype=float),
        np.asarray(document["V"], dtype=float),
        **kwargs,
    )
    schedule = Schedule.from_descriptor(document["schedule"]) if "schedule" in document else None
    return model, schedule


def save_hopping_json(path, hopping, schedule=None):
    write_json(path, hopping_to_json(hopping, schedule))


def load_hopping_json(path):
    import json

    with open(path) as fh:
        return hopping_from_json(json.load(fh))


def read_hopping_csv(path, grid):
    """Ingest a measured hopping map (columns: site i, site j, T).

    Site indices are flat row-major indices (i * ny + j).  Every
    nearest-neighbor link of the grid must receive exactly one amplitude
    (either direction); on-site energies are rebuilt from the dictionary
    as the adjacent-link sums.
    """
    t_x = np.full(grid.x_link_shape(), np.nan)
    t_y = np.full(grid.y_link_shape(), np.nan)
    ny = grid.ny
    nx = grid.nx

    def locate(a, b):
        ia, ja = divmod(a, ny)
        ib, jb = divmod(b, ny)
        if grid.periodic:
            if ja == jb and (ib - ia) % nx == 1:
                return ("x", ia, ja)
            if ja == jb and (ia - ib) % nx == 1:
                return ("x", ib, jb)
            if ia == ib and (jb - ja) % ny == 1:
                return ("y", ia, ja)
            if ia == ib and (ja - jb) % ny == 1:
                return ("y", ib, jb)
        else:
            if ja == jb and ib - ia == 1:
                return ("x", ia, ja)
            if ja == jb and ia - ib == 1:
                return ("x", ib, jb)
            if ia == ib and jb - ja == 1:
                return ("y", ia, ja)
            if ia == ib and ja - jb == 1:
                return ("y", ib, jb)
        return None

    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        for lineno, row in enumerate(reader, start=1):
            if not row or row[0].strip().lower() in ("i", "site_i", "#"):
                continue
            if len(row) != 3:
                raise ValueError(f"{path}:{lineno}: expected 'i,j,T', got {row!r}")
            a, b, t = int(row[0]), int(row[1]), float(row[2])
            if not (0 <= a < grid.nsites and 0 <= b < grid.nsites):
                raise ValueError(f"{path}:{lineno}: site index out of range")
            link = locate(a, b)
            if link is None:
                raise ValueError(f"{path}:{lineno}: sites {a} and {b} are not nearest neighbors")
            kind, i, j = link
            target = t_x if kind == "x" else t_y
            if not np.isnan(target[i, j]) and target[i, j] != t:
                raise ValueError(f"{path}:{lineno}: conflicting amplitudes for link {a}-{b}")
            target[i, j] = t

    if np.any(np.isnan(t_x)) or np.any(np.isnan(t_y)):
        missing = int(np.isnan(t_x).sum() + np.isnan(t_y).sum())
        raise ValueError(f"hopping CSV leaves {missing} nearest-neighbor links unspecified")
    v = _adjacent_link_sum(grid, np.abs(t_x), np.abs(t_y))
    return HoppingModel(grid, t_x, t_y, v)
