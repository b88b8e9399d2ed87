"""Scenario-driven command line front end.

Subcommands: curvature, hopping, geodesics, evolve, spectrum, bands,
tunneling-law.  Each run takes its parameters from flags and/or a JSON
config document (``--config``, one document per run, with a ``version``
field); flags override config keys, and unknown config keys are
rejected.  Outputs are written atomically, floats with 17 significant
digits, so identical configs produce byte-identical files.

Exit codes: 0 success, 2 bad config or precondition violation (the
diagnostic names the failing key), 3 numerical failure (operation name
and residual).

Set ``CURVEDLATTICE_THREADS`` to cap the BLAS thread count.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from .errors import ConvergenceError

TRAP_PRESETS = {
    "trap-sphere": (2.0, 1.0),
    "trap-hyperbolic": (-2.0, 1.0),
    "trap-asymptotically-flat": (1.0, 0.0),
    "trap-compact": (0.0, 1.0),
}

METRIC_SCENARIOS = ("flat",) + tuple(TRAP_PRESETS) + ("beam",)
EVOLVE_SCENARIOS = METRIC_SCENARIOS + ("flat-with-diagonals", "metric-wave", "flrw")


class ConfigError(ValueError):
    def __init__(self, key, message):
        self.key = key
        super().__init__(f"config error at '{key}': {message}")


# ---------------------------------------------------------------------------
# option schemas (name -> (type, default, help)); shared across flag parsing
# and strict config-file validation
# ---------------------------------------------------------------------------

GRID_OPTS = {
    "n": (int, 65, "square grid size (sites per side)"),
    "l": (float, 0.125, "lattice spacing"),
    "periodic": (bool, False, "periodic boundary"),
}

FAMILY_OPTS = {
    "a": (float, None, "r^2 coefficient of the conformal factor"),
    "b": (float, None, "r^4 coefficient of the conformal factor"),
}

BEAM_OPTS = {
    "alpha": (float, 1.0, "inverse-square beam width"),
    "a0": (float, 1.0, "depth amplitude of the beam profile"),
    "j0": (float, None, "hopping scale (default 1/l^2)"),
}

SCHEMAS = {
    "curvature": {**GRID_OPTS, "a": (float, 2.0, FAMILY_OPTS["a"][2]), "b": (float, 1.0, FAMILY_OPTS["b"][2])},
    "hopping": {
        **GRID_OPTS,
        "scenario": (str, "flat", f"one of {METRIC_SCENARIOS}"),
        **FAMILY_OPTS,
        **BEAM_OPTS,
        "mode": (str, "exact", "on-site assembly mode: exact | paper"),
        "invert": (bool, False, "reconstruct a metric from an input hopping map"),
        "input": (str, None, "hopping JSON or CSV (i,j,T) for --invert"),
    },
    "geodesics": {
        **GRID_OPTS,
        "scenario": (str, "flat", f"one of {METRIC_SCENARIOS}"),
        **FAMILY_OPTS,
        **BEAM_OPTS,
        "source": (str, "center", "source site 'i,j' or 'center'"),
    },
    "evolve": {
        **GRID_OPTS,
        "scenario": (str, "flat", f"one of {EVOLVE_SCENARIOS}"),
        **FAMILY_OPTS,
        **BEAM_OPTS,
        "mode": (str, "exact", "on-site assembly mode: exact | paper"),
        "j": (float, None, "uniform hopping scale (default 1/l^2)"),
        "rate": (float, 0.05, "expansion rate of the exponential scale factor (flrw)"),
        "h_amplitude": (float, 0.0, "metric-wave pulse amplitude"),
        "h_width": (float, 4.0, "metric-wave pulse width"),
        "h_center": (float, 0.0, "metric-wave pulse center (retarded coordinate)"),
        "order": (str, "schrodinger", "evolution order: schrodinger | wave"),
        "cx": (float, 0.0, "packet center x"),
        "cy": (float, 0.0, "packet center y"),
        "width": (float, None, "packet width (default 4 l)"),
        "px": (float, 0.0, "packet momentum x"),
        "py": (float, 0.0, "packet momentum y"),
        "dt": (float, 0.05, "time step"),
        "steps": (int, 100, "number of steps"),
        "record_every": (int, 1, "record observables every k steps"),
        "snapshot_every": (int, None, "store full states every k steps"),
        "snapshots": (str, None, "JSON path for the stored states"),
    },
    "spectrum": {
        **GRID_OPTS,
        "scenario": (str, "flat", f"one of {METRIC_SCENARIOS}"),
        **FAMILY_OPTS,
        **BEAM_OPTS,
        "mode": (str, "exact", "on-site assembly mode: exact | paper"),
        "k": (int, 16, "number of lowest eigenvalues"),
    },
    "bands": {
        "model": (str, "dimerized", "supercell model: chain | dimerized | three-site"),
        "j": (float, 1.0, "chain hopping"),
        "j1": (float, 1.0, "first hopping"),
        "j2": (float, 0.8, "second hopping"),
        "j3": (float, 0.6, "third hopping (three-site)"),
        "d": (float, 1.0, "cell length"),
        "num_p": (int, 101, "momentum samples across the zone"),
    },
    "tunneling-law": {
        "vmin": (float, 15.0, "smallest depth V0/E_R"),
        "vmax": (float, 30.0, "largest depth V0/E_R"),
        "num": (int, 16, "number of depths"),
        "modes": (int, 64, "plane-wave cutoff"),
    },
}

COMMON_OPTS = {
    "output": (str, None, "output file"),
    "seed": (int, 0, "seed for the iterative eigensolver start vector"),
}


def build_parser():
    parser = argparse.ArgumentParser(
        prog="curvedlattice",
        description="curved-space hopping lattices: mapping, dynamics, diagnostics",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for command, schema in SCHEMAS.items():
        p = sub.add_parser(command)
        p.add_argument("--config", type=str, default=None, help="JSON config document")
        p.add_argument("-o", "--output", type=str, default=None, help="output file")
        p.add_argument("--seed", type=int, default=None, help=COMMON_OPTS["seed"][2])
        for key, (typ, _default, helptext) in schema.items():
            flag = "--" + key.replace("_", "-")
            if typ is bool:
                p.add_argument(flag, dest=key, action="store_const", const=True,
                               default=None, help=helptext)
            else:
                p.add_argument(flag, dest=key, type=typ, default=None, help=helptext)
    return parser


def merge_config(args):
    """Config-file values, overridden by explicit flags, topped with defaults."""
    schema = {**SCHEMAS[args.command], **COMMON_OPTS}
    merged = {}
    if args.config is not None:
        try:
            with open(args.config) as fh:
                doc = json.load(fh)
        except OSError as exc:
            raise ConfigError("config", str(exc))
        except json.JSONDecodeError as exc:
            raise ConfigError("config", f"invalid JSON: {exc}")
        if not isinstance(doc, dict):
            raise ConfigError("config", "document must be a JSON object")
        if "version" not in doc:
            raise ConfigError("version", "missing required key")
        if doc["version"] != 1:
            raise ConfigError("version", f"unsupported version {doc['version']!r}")
        for key, value in doc.items():
            if key == "version":
                continue
            if key not in schema:
                raise ConfigError(key, "unknown key")
            typ = schema[key][0]
            if typ is bool:
                if not isinstance(value, bool):
                    raise ConfigError(key, f"expected a boolean, got {value!r}")
            elif typ is int:
                if not isinstance(value, int) or isinstance(value, bool):
                    raise ConfigError(key, f"expected an integer, got {value!r}")
            elif typ is float:
                if not isinstance(value, (int, float)) or isinstance(value, bool):
                    raise ConfigError(key, f"expected a number, got {value!r}")
                value = float(value)
            elif not isinstance(value, str):
                raise ConfigError(key, f"expected a string, got {value!r}")
            merged[key] = value
    for key in schema:
        flag_value = getattr(args, key, None)
        if flag_value is not None:
            merged[key] = flag_value
        merged.setdefault(key, schema[key][1])
    return merged


# ---------------------------------------------------------------------------
# scenario builders (library imports deferred so the thread cap is applied
# before the numerics stack loads)
# ---------------------------------------------------------------------------

def _grid(cfg):
    from .grid import Grid2D

    boundary = "periodic" if cfg["periodic"] else "open"
    return Grid2D.centered(cfg["n"], cfg["n"], cfg["l"], boundary)


def _family(cfg, preset=None):
    from .metric import ConformalFamily

    a, b = preset if preset is not None else (None, None)
    if cfg.get("a") is not None:
        a = cfg["a"]
    if cfg.get("b") is not None:
        b = cfg["b"]
    if a is None or b is None:
        raise ConfigError("a", "this scenario needs explicit family coefficients a, b")
    return ConformalFamily(a, b)


def _scenario_metric(cfg, grid):
    from .hopping import beam_hopping, hopping_to_metric
    from .metric import DiagonalMetric, family_to_metric

    scenario = cfg["scenario"]
    if scenario == "flat":
        return DiagonalMetric.flat(grid)
    if scenario in TRAP_PRESETS:
        return family_to_metric(_family(cfg, TRAP_PRESETS[scenario]), grid)
    if scenario == "beam":
        j0 = cfg["j0"] if cfg["j0"] is not None else 1.0 / grid.spacing**2
        return hopping_to_metric(beam_hopping(j0, cfg["a0"], cfg["alpha"], grid))
    raise ConfigError("scenario", f"unknown scenario {scenario!r}")


def _require_output(cfg):
    if cfg["output"] is None:
        raise ConfigError("output", "an output path is required")
    return cfg["output"]


def _summary(path, description):
    print(f"wrote {path}: {description}")


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def cmd_curvature(cfg):
    import numpy as np

    from .io import write_site_field_csv
    from .metric import curvature_numeric, family_to_metric

    out = _require_output(cfg)
    grid = _grid(cfg)
    field = curvature_numeric(family_to_metric(_family(cfg, (cfg["a"], cfg["b"])), grid))
    write_site_field_csv(out, grid, field)
    _summary(out, f"curvature on {grid.nx}x{grid.ny} sites "
                  f"({int(np.sum(~np.isnan(field)))} interior values)")
    return 0


def cmd_geodesics(cfg):
    from .geodesic import geodesic_map
    from .io import write_site_field_csv

    out = _require_output(cfg)
    grid = _grid(cfg)
    metric = _scenario_metric(cfg, grid)
    if cfg["source"] == "center":
        source = ((grid.nx - 1) // 2, (grid.ny - 1) // 2)
    else:
        try:
            si, sj = (int(part) for part in cfg["source"].split(","))
        except ValueError:
            raise ConfigError("source", f"expected 'i,j' or 'center', got {cfg['source']!r}")
        source = (si, sj)
    field = geodesic_map(metric, source=source)
    write_site_field_csv(out, grid, field)
    _summary(out, f"geodesic distances from site {source} on {grid.nx}x{grid.ny} sites")
    return 0


def cmd_hopping(cfg):
    from .hopping import (hopping_to_metric, load_hopping_json, metric_to_hopping,
                          read_hopping_csv, save_hopping_json)
    from .metric import save_metric_json

    out = _require_output(cfg)
    grid = _grid(cfg)
    if cfg["mode"] not in ("exact", "paper"):
        raise ConfigError("mode", f"must be 'exact' or 'paper', got {cfg['mode']!r}")
    if cfg["invert"]:
        if cfg["input"] is None:
            raise ConfigError("input", "--invert needs an input hopping map")
        if cfg["input"].endswith(".csv"):
            model = read_hopping_csv(cfg["input"], grid)
        else:
            model, _ = load_hopping_json(cfg["input"])
        metric = hopping_to_metric(model)
        save_metric_json(out, metric)
        _summary(out, f"metric reconstructed from {cfg['input']}")
        return 0
    model = metric_to_hopping(_scenario_metric(cfg, grid), mode=cfg["mode"])
    save_hopping_json(out, model)
    _summary(out, f"{cfg['scenario']} hopping model ({cfg['mode']} mode) on {grid.nx}x{grid.ny} sites")
    return 0


def _evolve_model(cfg, grid):
    from .hopping import (MetricWaveHopping, Schedule, flrw_schedule,
                          metric_to_hopping, metric_wave_hopping)

    scenario = cfg["scenario"]
    j = cfg["j"] if cfg["j"] is not None else 1.0 / grid.spacing**2
    if scenario in METRIC_SCENARIOS:
        return metric_to_hopping(_scenario_metric(cfg, grid), mode=cfg["mode"])
    if scenario == "flat-with-diagonals":
        return metric_wave_hopping(j, Schedule.constant("wave-profile", 0.0), grid, 0.0)
    if scenario == "metric-wave":
        if cfg["h_amplitude"] == 0.0:
            profile = Schedule.constant("wave-profile", 0.0)
        else:
            profile = Schedule.wave_gaussian(cfg["h_amplitude"], cfg["h_width"], cfg["h_center"])
        return MetricWaveHopping(grid, j, profile)
    if scenario == "flrw":
        j0 = cfg["j0"] if cfg["j0"] is not None else 1.0 / grid.spacing**2
        return flrw_schedule(Schedule.scale_factor_exponential(cfg["rate"]), j0, grid)
    raise ConfigError("scenario", f"unknown scenario {scenario!r}")


def cmd_evolve(cfg):
    from .dynamics import evolve_schrodinger, evolve_wave, gaussian_packet
    from .hopping import HoppingModel

    out = _require_output(cfg)
    if cfg["order"] not in ("schrodinger", "wave"):
        raise ConfigError("order", f"must be 'schrodinger' or 'wave', got {cfg['order']!r}")
    if (cfg["snapshot_every"] is None) != (cfg["snapshots"] is None):
        raise ConfigError("snapshots", "snapshot_every and snapshots must be given together")
    grid = _grid(cfg)
    model = _evolve_model(cfg, grid)
    width = cfg["width"] if cfg["width"] is not None else 4.0 * grid.spacing
    state = gaussian_packet(grid, (cfg["cx"], cfg["cy"]), width, (cfg["px"], cfg["py"]))
    kwargs = dict(
        record_every=cfg["record_every"],
        snapshot_every=cfg["snapshot_every"],
    )
    if cfg["order"] == "wave":
        if not isinstance(model, HoppingModel):
            raise ConfigError("order", "wave evolution needs a static scenario")
        traj = evolve_wave(state, model, grid, cfg["dt"], cfg["steps"], **kwargs)
    else:
        traj = evolve_schrodinger(state, model, grid, cfg["dt"], cfg["steps"], **kwargs)
    traj.to_csv(out)
    _summary(out, f"{cfg['order']} trajectory, {cfg['steps']} steps of dt={cfg['dt']}")
    if cfg["snapshots"] is not None:
        traj.snapshots_to_json(cfg["snapshots"])
        _summary(cfg["snapshots"], f"{len(traj.snapshots)} state snapshots")
    return 0


def cmd_spectrum(cfg):
    from .dynamics import assemble_hamiltonian
    from .hopping import metric_to_hopping
    from .io import write_csv
    from .spectra import lowest_eigenpairs

    out = _require_output(cfg)
    if cfg["mode"] not in ("exact", "paper"):
        raise ConfigError("mode", f"must be 'exact' or 'paper', got {cfg['mode']!r}")
    grid = _grid(cfg)
    h = assemble_hamiltonian(metric_to_hopping(_scenario_metric(cfg, grid), mode=cfg["mode"]))
    k = min(cfg["k"], grid.nsites)
    vals, _ = lowest_eigenpairs(h, k, seed=cfg["seed"])
    write_csv(out, ["index", "energy"], [(i, vals[i]) for i in range(k)])
    _summary(out, f"{k} lowest eigenvalues of the {cfg['scenario']} model on {grid.nx}x{grid.ny} sites")
    return 0


def cmd_bands(cfg):
    import numpy as np

    from .spectra import SupercellModel, bloch_bands

    out = _require_output(cfg)
    d = cfg["d"]
    if cfg["model"] == "chain":
        model = SupercellModel.chain(cfg["j"], d)
    elif cfg["model"] == "dimerized":
        model = SupercellModel.dimerized_chain(cfg["j1"], cfg["j2"], d)
    elif cfg["model"] == "three-site":
        model = SupercellModel.three_site_chain(cfg["j1"], cfg["j2"], cfg["j3"], d=d)
    else:
        raise ConfigError("model", f"unknown supercell model {cfg['model']!r}")
    momenta = np.linspace(-np.pi / d, np.pi / d, cfg["num_p"])
    bloch_bands(model, momenta).to_csv(out)
    _summary(out, f"{model.nbasis} bands at {cfg['num_p']} momenta ({cfg['model']})")
    return 0


def cmd_tunneling_law(cfg):
    import numpy as np

    from .io import write_csv
    from .spectra import sinusoidal_scan, tunneling_slope

    out = _require_output(cfg)
    if not 0 <= cfg["vmin"] < cfg["vmax"]:
        raise ConfigError("vmin", "need 0 <= vmin < vmax")
    if cfg["num"] < 2:
        raise ConfigError("num", "need at least two depths")
    v0s = np.linspace(cfg["vmin"], cfg["vmax"], cfg["num"])
    rows = sinusoidal_scan(v0s, n_modes=cfg["modes"])
    write_csv(out, ["V0_over_ER", "E_min", "E_max", "J_over_ER"], rows)
    slope = tunneling_slope([r[0] for r in rows], [r[3] for r in rows])
    _summary(out, f"lowest-band scan over {cfg['num']} depths; "
                  f"slope of ln J vs sqrt(V0/E_R) = {slope:.6f}")
    return 0


COMMANDS = {
    "curvature": cmd_curvature,
    "geodesics": cmd_geodesics,
    "hopping": cmd_hopping,
    "evolve": cmd_evolve,
    "spectrum": cmd_spectrum,
    "bands": cmd_bands,
    "tunneling-law": cmd_tunneling_law,
}


def _apply_thread_cap():
    cap = os.environ.get("CURVEDLATTICE_THREADS")
    if cap:
        for var in ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS", "MKL_NUM_THREADS",
                    "NUMEXPR_NUM_THREADS"):
            os.environ.setdefault(var, cap)


def main(argv=None):
    _apply_thread_cap()
    args = build_parser().parse_args(argv)
    try:
        cfg = merge_config(args)
        return COMMANDS[args.command](cfg)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ConvergenceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
