"""Curved 2D geometries as optical-lattice hopping models.

The package maps diagonal 2D metrics to tight-binding hopping models and
back, evolves quantum fields on the resulting lattices (static,
time-dependent lattice depth, traveling metric waves), and verifies the
emergent geometry through curvature maps, geodesic distances, and
spectral diagnostics.  Units: hbar = 1 and 2 m_atom = 1, so energies are
inverse lengths squared and the flat lattice has J = 1/spacing^2.
"""

from .errors import ConvergenceError
from .grid import Grid2D
from .state import WaveState
from .metric import (
    ConformalFamily,
    DiagonalMetric,
    curvature_family,
    curvature_numeric,
    family_to_metric,
    load_metric_json,
    metric_from_json,
    metric_to_json,
    radial_distance,
    save_metric_json,
)
from .geodesic import dijkstra_map, geodesic_map
from .hopping import (
    FLRWHopping,
    HoppingModel,
    MetricWaveHopping,
    Schedule,
    beam_hopping,
    depth_to_J,
    flrw_schedule,
    hopping_from_json,
    hopping_to_json,
    hopping_to_metric,
    lab_field_transform,
    load_hopping_json,
    metric_to_hopping,
    metric_wave_hopping,
    read_hopping_csv,
    save_hopping_json,
    uniform_hopping,
)
from .dynamics import (
    Trajectory,
    assemble_hamiltonian,
    evolve_schrodinger,
    evolve_wave,
    gaussian_packet,
    gershgorin_max,
    observables,
)
from .spectra import (
    BandResult,
    SupercellModel,
    bloch_bands,
    dirac_fit,
    dispersion_flat,
    effective_mass_fit,
    lowest_eigenpairs,
    sinusoidal_band,
    sinusoidal_scan,
    tunneling_slope,
)
from .io import write_site_field_csv

__version__ = "0.1.0"

__all__ = [
    "ConvergenceError",
    "Grid2D",
    "WaveState",
    "ConformalFamily",
    "DiagonalMetric",
    "curvature_family",
    "curvature_numeric",
    "family_to_metric",
    "radial_distance",
    "metric_to_json",
    "metric_from_json",
    "save_metric_json",
    "load_metric_json",
    "geodesic_map",
    "dijkstra_map",
    "HoppingModel",
    "Schedule",
    "FLRWHopping",
    "MetricWaveHopping",
    "metric_to_hopping",
    "hopping_to_metric",
    "lab_field_transform",
    "depth_to_J",
    "uniform_hopping",
    "flrw_schedule",
    "metric_wave_hopping",
    "beam_hopping",
    "hopping_to_json",
    "hopping_from_json",
    "save_hopping_json",
    "load_hopping_json",
    "read_hopping_csv",
    "Trajectory",
    "assemble_hamiltonian",
    "evolve_schrodinger",
    "evolve_wave",
    "gaussian_packet",
    "gershgorin_max",
    "observables",
    "BandResult",
    "SupercellModel",
    "bloch_bands",
    "dirac_fit",
    "dispersion_flat",
    "effective_mass_fit",
    "lowest_eigenpairs",
    "sinusoidal_band",
    "sinusoidal_scan",
    "tunneling_slope",
    "write_site_field_csv",
    "__version__",
]
