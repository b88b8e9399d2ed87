import numpy as np
import pytest

from curvedlattice import Grid2D, write_site_field_csv
from curvedlattice.io import atomic_write_text, fmt_float, write_csv


def test_float_formatting_round_trips():
    for value in (np.pi, 1.0, 1e-17, -3.25, 4.0, 0.1):
        assert float(fmt_float(value)) == value


def test_nan_prints_as_nan():
    assert fmt_float(float("nan")) == "nan"


def test_atomic_write_replaces_whole_file(tmp_path):
    path = tmp_path / "out.txt"
    path.write_text("old")
    atomic_write_text(path, "new contents")
    assert path.read_text() == "new contents"
    leftovers = [p for p in tmp_path.iterdir() if p.name != "out.txt"]
    assert leftovers == []


def test_site_field_csv_layout(tmp_path):
    g = Grid2D(2, 3, 0.5, origin=(0.0, 0.0))
    field = np.arange(6.0).reshape(2, 3)
    path = tmp_path / "field.csv"
    write_site_field_csv(path, g, field)
    lines = path.read_text().splitlines()
    assert lines[0] == "x,y,value"
    assert lines[1] == "0,0,0"
    assert lines[2] == "0,0.5,1"
    assert lines[4] == "0.5,0,3"
    assert len(lines) == 7


def test_site_field_csv_shape_checked(tmp_path):
    g = Grid2D(3, 3, 1.0)
    with pytest.raises(ValueError):
        write_site_field_csv(tmp_path / "x.csv", g, np.zeros((2, 2)))


def test_csv_writer_is_deterministic(tmp_path):
    rows = [(0.1, 2, "x"), (np.pi, 4, "y")]
    a = tmp_path / "a.csv"
    b = tmp_path / "b.csv"
    write_csv(a, ["f", "i", "s"], rows)
    write_csv(b, ["f", "i", "s"], rows)
    assert a.read_bytes() == b.read_bytes()
