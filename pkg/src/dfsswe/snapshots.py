"""Snapshot and metrics file formats.

A snapshot is one field in one file: a single UTF-8 header line of
space-separated ``key:value`` pairs terminated by a newline, followed by the
row-major float64 little-endian grid values.  Keys always present: field,
units, grid, J, N_lat, M_lon, time_s.  Extra keys are allowed and ignored by
readers that do not know them.

The metrics file is a CSV whose first lines are ``#``-prefixed header
comments (configuration echo), then the column row::

    step,time_s,l1,l2,linf,mass_rel_err,energy_rel_err,wallclock_s_cumulative

Error-norm cells are blank when no exact solution exists.
"""

from __future__ import annotations

import io
from pathlib import Path

import numpy as np

from .fields import FieldParity, GridField
from .grid import Grid, GridKind, build_grid

METRICS_COLUMNS = (
    "step",
    "time_s",
    "l1",
    "l2",
    "linf",
    "mass_rel_err",
    "energy_rel_err",
    "wallclock_s_cumulative",
)


def write_snapshot(
    path: str | Path,
    field: GridField,
    name: str,
    units: str,
    time_s: float,
    extra: dict | None = None,
) -> None:
    grid = field.grid
    meta = {
        "field": name,
        "units": units,
        "grid": grid.kind.value,
        "J": grid.J,
        "N_lat": grid.n_lat,
        "M_lon": grid.m_lon,
        "time_s": repr(float(time_s)),
    }
    if extra:
        for k, v in extra.items():
            meta.setdefault(str(k), str(v))
    header = " ".join(f"{k}:{v}" for k, v in meta.items()) + "\n"
    with open(path, "wb") as f:
        f.write(header.encode("utf-8"))
        f.write(np.ascontiguousarray(field.values, dtype="<f8").tobytes())


def read_snapshot(path: str | Path) -> tuple[GridField, dict]:
    """Read a snapshot; returns the field (scalar parity) and its metadata."""
    with open(path, "rb") as f:
        header = f.readline().decode("utf-8").strip()
        raw = f.read()
    meta: dict = {}
    for tok in header.split():
        if ":" not in tok:
            raise ValueError(f"malformed snapshot header token {tok!r}")
        k, v = tok.split(":", 1)
        meta[k] = v
    try:
        kind = GridKind(meta["grid"])
        J = int(meta["J"])
        n_lat, m_lon = int(meta["N_lat"]), int(meta["M_lon"])
        meta["time_s"] = float(meta["time_s"])
    except (KeyError, ValueError) as e:
        raise ValueError(f"incomplete snapshot header: {header!r}") from e
    grid = build_grid(kind, J)
    if grid.shape != (n_lat, m_lon):
        raise ValueError("snapshot header inconsistent with its grid kind")
    values = np.frombuffer(raw, dtype="<f8")
    if values.size != n_lat * m_lon:
        raise ValueError(
            f"snapshot payload has {values.size} values, expected {n_lat * m_lon}"
        )
    return GridField(grid, FieldParity.SCALAR, values.reshape(n_lat, m_lon).copy()), meta


class MetricsWriter:
    """Appends metrics rows; flushes eagerly so aborted runs keep partial output."""

    def __init__(self, path: str | Path, header_lines: list[str]):
        self._f = open(path, "w", buffering=1)
        for line in header_lines:
            self._f.write(f"# {line}\n")
        self._f.write(",".join(METRICS_COLUMNS) + "\n")

    def write_row(self, step, time_s, l1, l2, linf, mass_err, energy_err, wallclock):
        def fmt(x):
            return "" if x is None else f"{x:.16e}"

        self._f.write(
            f"{step},{time_s:.6f},{fmt(l1)},{fmt(l2)},{fmt(linf)},"
            f"{fmt(mass_err)},{fmt(energy_err)},{wallclock:.3f}\n"
        )

    def close(self):
        self._f.close()

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()


def read_metrics(path: str | Path) -> dict[str, np.ndarray]:
    """Parse a metrics CSV into column arrays (NaN for blank cells)."""
    rows = []
    with open(path) as f:
        cols = None
        for line in f:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if cols is None:
                cols = line.split(",")
                continue
            rows.append([float(x) if x else np.nan for x in line.split(",")])
    if cols is None:
        raise ValueError(f"{path} contains no metrics table")
    data = np.asarray(rows, dtype=float).reshape(-1, len(cols))
    return {c: data[:, i] for i, c in enumerate(cols)}
