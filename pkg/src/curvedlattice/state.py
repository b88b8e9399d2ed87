"""Complex field amplitudes on the lattice."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

__all__ = ["WaveState"]


@dataclass
class WaveState:
    """One complex amplitude per site, plus an optional velocity field.

    ``rep`` distinguishes the lab field (psi, flat normalization
    sum |psi|^2) from the geometric field (phi, weighted normalization
    sum sqrt(det g) |phi|^2); the two are related pointwise by
    det_g^{1/4}.  ``velocity`` carries d(psi)/dt for second-order (wave)
    evolution and is ignored by first-order evolution.
    """

    psi: np.ndarray
    rep: str = "lab"
    velocity: np.ndarray | None = field(default=None)

    def __post_init__(self):
        self.psi = np.asarray(self.psi, dtype=complex)
        if self.rep not in ("lab", "geometric"):
            raise ValueError(f"rep must be 'lab' or 'geometric', got {self.rep!r}")
        if not np.all(np.isfinite(self.psi)):
            raise ValueError("state amplitudes must be finite")
        if self.velocity is not None:
            self.velocity = np.asarray(self.velocity, dtype=complex)
            if self.velocity.shape != self.psi.shape:
                raise ValueError("velocity shape must match psi")

    def norm_squared(self):
        return float(np.sum(np.abs(self.psi) ** 2))

    def copy(self):
        vel = None if self.velocity is None else self.velocity.copy()
        return WaveState(self.psi.copy(), self.rep, vel)
