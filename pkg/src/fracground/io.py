"""CSV/JSON serialisation of fields and reports.

Floats are written with 17 significant digits so files round-trip exactly.
"""

from __future__ import annotations

import csv
import json
import math
from pathlib import Path

import numpy as np

from .errors import DomainError
from .spectral import Field, GridSpec

FLOAT_FMT = "{:.17g}"


def fmt(value) -> str:
    return FLOAT_FMT.format(float(value))


def _clean(obj):
    """Make ``obj`` JSON-safe: 17-digit floats, no NaN/inf (-> None)."""
    if isinstance(obj, dict):
        return {k: _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        if not math.isfinite(x):
            return None
        return float(fmt(x))
    return obj


def dumps(obj) -> str:
    # repr of a Python float is already the shortest round-trip form
    return json.dumps(_clean(obj), indent=2, sort_keys=True) + "\n"


def write_json(path, obj) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(dumps(obj))
    return path


def read_json(path):
    return json.loads(Path(path).read_text())


def write_field_csv(path, u: Field, extra=None) -> Path:
    """Columns ``x,value`` plus any ``extra`` name -> array columns."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    extra = extra or {}
    names = ["x", "value", *extra]
    cols = [u.grid.x, u.values, *[np.asarray(v) for v in extra.values()]]
    with path.open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(names)
        for row in zip(*cols):
            w.writerow([fmt(v) for v in row])
    return path


def read_field_csv(path) -> Field:
    """Inverse of :func:`write_field_csv`; the grid is recovered from ``x``."""
    with Path(path).open(newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows or rows[0][:2] != ["x", "value"]:
        raise DomainError(f"{path}: expected a header starting with x,value")
    data = np.array([[float(r[0]), float(r[1])] for r in rows[1:]])
    n = data.shape[0]
    if n < 8 or n % 2:
        raise DomainError(f"{path}: need an even number >= 8 of rows, got {n}")
    x = data[:, 0]
    L = -x[0]
    grid = GridSpec(L, n)
    if not np.allclose(x, grid.x, rtol=0, atol=1e-9 * L):
        raise DomainError(f"{path}: x column is not a uniform grid on [-L, L)")
    return Field(grid, data[:, 1])


def write_grid_json(path, grid: GridSpec) -> Path:
    return write_json(path, {"L": grid.L, "N": grid.N})


def report_to_dict(report, profile_path=None) -> dict:
    out = {
        "spec": report.spec.to_dict(),
        "grid": {"L": report.profile.grid.L, "N": report.profile.grid.N},
        **report.scalars(),
        "notes": list(report.notes),
        "profile_csv": str(profile_path) if profile_path is not None else None,
    }
    return out


def write_report(outdir, report, stem="report") -> Path:
    """Write ``<stem>.json`` and the profile as ``profile.csv`` (or ``<stem>_profile.csv``)."""
    outdir = Path(outdir)
    csv_name = "profile.csv" if stem == "report" else f"{stem}_profile.csv"
    write_field_csv(outdir / csv_name, report.profile)
    return write_json(outdir / f"{stem}.json", report_to_dict(report, csv_name))
