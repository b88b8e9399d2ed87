"""Atomic file output and the fixed text formats used by the serializers.

All floating-point values are printed with 17 significant digits so that
identical runs produce byte-identical files.
"""

from __future__ import annotations

import json
import os
import tempfile

import numpy as np

__all__ = ["fmt_float", "atomic_write_text", "write_csv", "write_json", "write_site_field_csv"]


def fmt_float(x):
    """Render a float with 17 significant digits (round-trip safe)."""
    return format(float(x), ".17g")


def atomic_write_text(path, text):
    """Write ``text`` to ``path`` via a temp file + rename (no partial files)."""
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix="~")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _cell(value):
    if isinstance(value, (float, np.floating)):
        return fmt_float(value)
    return str(value)


def write_csv(path, header, rows):
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(_cell(v) for v in row))
    atomic_write_text(path, "\n".join(lines) + "\n")


def write_json(path, document):
    atomic_write_text(path, json.dumps(document, indent=1) + "\n")


def write_site_field_csv(path, grid, values):
    """Serialize a site field as ``x,y,value`` rows (row-major site order)."""
    values = np.asarray(values)
    if values.shape != grid.shape:
        raise ValueError(f"field shape {values.shape} does not match grid {grid.shape}")
    x = grid.x_coords()
    y = grid.y_coords()
    rows = (
        (x[i], y[j], values[i, j])
        for i in range(grid.nx)
        for j in range(grid.ny)
    )
    write_csv(path, ["x", "y", "value"], rows)
