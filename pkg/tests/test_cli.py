import json

import numpy as np
import pytest

from curvedlattice.cli import main


def read_field_csv(path):
    data = np.genfromtxt(path, delimiter=",", names=True)
    return data["x"], data["y"], data["value"]


def test_curvature_constant_family(tmp_path):
    out = tmp_path / "K.csv"
    rc = main(["curvature", "--a", "2", "--b", "1", "--n", "129",
               "--l", "0.03125", "-o", str(out)])
    assert rc == 0
    x, y, k = read_field_csv(out)
    interior = ~np.isnan(k)
    assert interior.sum() == 127 * 127
    assert np.max(np.abs(k[interior] - 4.0)) < 0.01


def test_spectrum_flat_matches_dispersion(tmp_path):
    out = tmp_path / "ev.csv"
    rc = main(["spectrum", "--scenario", "flat", "--periodic", "--n", "8",
               "--l", "1", "--k", "64", "-o", str(out)])
    assert rc == 0
    data = np.genfromtxt(out, delimiter=",", names=True)
    ps = 2 * np.pi * np.arange(8) / 8
    expected = np.sort([4.0 - 2 * np.cos(a) - 2 * np.cos(b) for a in ps for b in ps])
    assert np.allclose(np.sort(data["energy"]), expected, atol=1e-9)


def test_geodesics_flat_euclidean(tmp_path):
    out = tmp_path / "u.csv"
    rc = main(["geodesics", "--scenario", "flat", "--n", "41", "--l", "0.25",
               "-o", str(out)])
    assert rc == 0
    x, y, u = read_field_csv(out)
    target = (np.isclose(x, 0.75)) & (np.isclose(y, 1.0))
    assert abs(u[target][0] - 1.25) < 0.025


def test_evolve_wave_scenario_reduces_to_static(tmp_path):
    args = ["--n", "12", "--l", "1", "--dt", "0.05", "--steps", "10",
            "--width", "2.5", "--px", "0.3"]
    t1 = tmp_path / "t1.csv"
    t2 = tmp_path / "t2.csv"
    assert main(["evolve", "--scenario", "metric-wave", "--h-amplitude", "0",
                 *args, "-o", str(t1)]) == 0
    assert main(["evolve", "--scenario", "flat-with-diagonals", *args,
                 "-o", str(t2)]) == 0
    assert t1.read_bytes() == t2.read_bytes()


def test_evolve_is_deterministic(tmp_path):
    args = ["evolve", "--scenario", "flrw", "--rate", "0.1", "--n", "10",
            "--l", "1", "--periodic", "--dt", "0.05", "--steps", "20"]
    a = tmp_path / "a.csv"
    b = tmp_path / "b.csv"
    assert main([*args, "-o", str(a)]) == 0
    assert main([*args, "-o", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_evolve_snapshots(tmp_path):
    out = tmp_path / "t.csv"
    snaps = tmp_path / "s.json"
    rc = main(["evolve", "--scenario", "flat", "--n", "8", "--l", "1",
               "--dt", "0.1", "--steps", "10", "--snapshot-every", "5",
               "--snapshots", str(snaps), "-o", str(out)])
    assert rc == 0
    doc = json.loads(snaps.read_text())
    assert [s["t"] for s in doc["snapshots"]] == [0.0, 0.5, 1.0]
    assert len(doc["snapshots"][0]["psi_re"]) == 8


def test_trajectory_header_schema(tmp_path):
    out = tmp_path / "t.csv"
    main(["evolve", "--scenario", "flat", "--n", "8", "--l", "1",
          "--dt", "0.1", "--steps", "5", "-o", str(out)])
    header = out.read_text().splitlines()[0]
    assert header == "t,norm,energy,mean_x,mean_y,width_x,width_y,quadrupole"


def test_bands_csv_schema(tmp_path):
    out = tmp_path / "b.csv"
    rc = main(["bands", "--model", "dimerized", "--j1", "1", "--j2", "0.8",
               "--num-p", "21", "-o", str(out)])
    assert rc == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "p,band_index,E"
    assert len(lines) == 1 + 21 * 2


def test_tunneling_law_csv_and_slope(tmp_path, capsys):
    out = tmp_path / "scan.csv"
    rc = main(["tunneling-law", "--vmin", "15", "--vmax", "30", "--num", "6",
               "-o", str(out)])
    assert rc == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "V0_over_ER,E_min,E_max,J_over_ER"
    assert len(lines) == 7
    assert "slope of ln J" in capsys.readouterr().out


def test_hopping_json_then_invert_round_trip(tmp_path):
    hop_path = tmp_path / "hop.json"
    met_path = tmp_path / "met.json"
    assert main(["hopping", "--scenario", "trap-sphere", "--n", "17",
                 "--l", "0.125", "-o", str(hop_path)]) == 0
    doc = json.loads(hop_path.read_text())
    assert set(doc) >= {"version", "grid", "T_x", "T_y", "V"}
    assert main(["hopping", "--invert", "--input", str(hop_path), "--n", "17",
                 "--l", "0.125", "-o", str(met_path)]) == 0
    met = json.loads(met_path.read_text())
    tx = np.asarray(doc["T_x"])
    gxx = np.asarray(met["gxx_inv"])
    assert np.allclose(gxx, 0.125**2 * np.abs(tx), rtol=1e-15)


def test_config_file_with_flag_override(tmp_path):
    cfg = tmp_path / "run.json"
    cfg.write_text(json.dumps({"version": 1, "a": 2.0, "b": 1.0, "n": 33, "l": 0.125}))
    out = tmp_path / "K.csv"
    rc = main(["curvature", "--config", str(cfg), "--n", "17", "-o", str(out)])
    assert rc == 0
    x, _, _ = read_field_csv(out)
    assert len(x) == 17 * 17  # flag overrides config


def test_unknown_config_key_rejected(tmp_path, capsys):
    cfg = tmp_path / "run.json"
    cfg.write_text(json.dumps({"version": 1, "banana": 3}))
    out = tmp_path / "K.csv"
    rc = main(["curvature", "--config", str(cfg), "-o", str(out)])
    assert rc == 2
    assert "banana" in capsys.readouterr().err
    assert not out.exists()


def test_missing_version_rejected(tmp_path, capsys):
    cfg = tmp_path / "run.json"
    cfg.write_text(json.dumps({"a": 2.0}))
    rc = main(["curvature", "--config", str(cfg), "-o", str(tmp_path / "K.csv")])
    assert rc == 2
    assert "version" in capsys.readouterr().err


def test_precondition_violation_no_partial_output(tmp_path, capsys):
    out = tmp_path / "K.csv"
    rc = main(["curvature", "--a", "-2", "--b", "1", "--n", "65",
               "--l", "0.0625", "-o", str(out)])
    assert rc == 2
    assert not out.exists()
    assert "vanishes" in capsys.readouterr().err
    assert list(tmp_path.iterdir()) == []  # no temp leftovers either


def test_wrong_config_type_names_key(tmp_path, capsys):
    cfg = tmp_path / "run.json"
    cfg.write_text(json.dumps({"version": 1, "n": "many"}))
    rc = main(["curvature", "--config", str(cfg), "-o", str(tmp_path / "K.csv")])
    assert rc == 2
    assert "'n'" in capsys.readouterr().err


def test_seventeen_digit_output(tmp_path):
    out = tmp_path / "b.csv"
    main(["bands", "--model", "chain", "--j", "1", "--num-p", "3", "-o", str(out)])
    first = out.read_text().splitlines()[1].split(",")
    assert first[0] == "-3.1415926535897931"  # 17 significant digits
