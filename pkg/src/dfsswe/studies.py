"""Multi-run convergence and conservation studies.

A study is described by a plain-text ``key: value`` file, e.g.::

    kind: temporal
    case: tc2
    grid: 0
    J: 80
    dts: 1800, 900, 450, 225
    interps: dfs, lag5
    days: 5

or ``kind: spatial`` with ``Js: 40, 80`` plus ``dt`` and an optional
``reference`` snapshot path (restricted to each coarse grid spectrally).
Results are CSV tables with one row per completed run; rows of aborted runs
are kept and flagged in the ``status`` column.
"""

from __future__ import annotations

import math
from pathlib import Path

import numpy as np

from .cases import exact_solution, init_state, make_case
from .constants import EARTH
from .diagnostics import energy, error_norms, mass
from .fields import GridField
from .grid import GridKind, build_grid
from .interpolate import dfs_interp
from .snapshots import read_snapshot
from .stepper import NumericalAbort, SislConfig, advance_step

_GRID_KINDS = {"m1": GridKind.GRID_M1, "0": GridKind.GRID_0, "1": GridKind.GRID_1}


def _simulate(case, grid, config, days):
    """Run one configuration; returns (state, h_s, mass_drift, energy_drift)."""
    state, h_s = init_state(case, grid, EARTH)
    m0 = mass(state, h_s, EARTH)
    e0 = energy(state, h_s, EARTH)
    n_steps = int(round(days * 86400.0 / config.dt))
    for _ in range(n_steps):
        state = advance_step(state, config, EARTH, h_s)
    m_err = abs(mass(state, h_s, EARTH) - m0) / abs(m0)
    e_err = abs(energy(state, h_s, EARTH) - e0) / abs(e0)
    return state, h_s, m_err, e_err


def _make_config(case, dt, interp, grid, overrides=None) -> SislConfig:
    kw = dict(
        dt=dt,
        interp_method=interp,
        rotation_axis=case.rotation_axis,
        advect_only=case.advect_only,
    )
    if overrides:
        kw.update(overrides)
    return SislConfig(**kw)


def temporal_study(
    case_tag: str,
    J: int,
    dt_list: list[float],
    interp_list: list[str],
    days: float,
    grid_kind: str = "0",
    config_overrides: dict | None = None,
) -> list[dict]:
    """Errors versus time step at fixed resolution, with observed orders
    log2(e(2 dt) / e(dt)) appended per interpolation method."""
    case = make_case(case_tag)
    grid = build_grid(_GRID_KINDS[grid_kind], J)
    rows = []
    for interp in interp_list:
        for dt in dt_list:
            row = {"interp": interp, "dt": dt, "status": "ok"}
            try:
                config = _make_config(case, dt, interp, grid, config_overrides)
                state, h_s, m_err, e_err = _simulate(case, grid, config, days)
                if case.has_exact_solution:
                    ref = exact_solution(case, state.time, grid, EARTH)
                    row["l1"], row["l2"], row["linf"] = error_norms(state.h, ref)
                else:
                    row["l1"] = row["l2"] = row["linf"] = math.nan
                row["mass_err"], row["energy_err"] = m_err, e_err
            except NumericalAbort as e:
                row["status"] = f"abort: {e}"
                row.update(l1=math.nan, l2=math.nan, linf=math.nan,
                           mass_err=math.nan, energy_err=math.nan)
            rows.append(row)
        # observed orders between successive dt pairs
        sub = [r for r in rows if r["interp"] == interp and r["status"] == "ok"]
        sub.sort(key=lambda r: -r["dt"])
        for a, b in zip(sub, sub[1:]):
            if a["dt"] / b["dt"] == 2.0 and b["linf"] > 0:
                b["order_linf"] = math.log2(a["linf"] / b["linf"])
                if b["l2"] > 0:
                    b["order_l2"] = math.log2(a["l2"] / b["l2"])
    return rows


def restrict_reference(ref_field: GridField, coarse_grid, M=None, N=None) -> GridField:
    """Spectral restriction of a fine-grid snapshot to a coarse grid."""
    fine = ref_field.grid
    if M is None:
        M = min(fine.m_lon, coarse_grid.m_lon) // 2 - 1
    if N is None:
        N = min(fine.J, coarse_grid.J) - 2
    th, ph = np.meshgrid(coarse_grid.colatitudes, coarse_grid.longitudes, indexing="ij")
    pts = np.column_stack([th.ravel(), ph.ravel()])
    vals = dfs_interp(ref_field, pts, M, N, None, 1e-13)
    return GridField(coarse_grid, ref_field.parity, vals.reshape(coarse_grid.shape))


def spatial_study(
    case_tag: str,
    J_list: list[int],
    dt: float,
    interp_list: list[str],
    days: float,
    reference: str | None = None,
    grid_kind: str = "0",
    config_overrides: dict | None = None,
) -> list[dict]:
    """Errors versus resolution at fixed time step.  Without an exact
    solution a fine-grid reference snapshot is restricted spectrally."""
    case = make_case(case_tag)
    ref_field = None
    if reference is not None:
        ref_field, _ = read_snapshot(reference)
    rows = []
    for interp in interp_list:
        for J in J_list:
            grid = build_grid(_GRID_KINDS[grid_kind], J)
            row = {"interp": interp, "J": J, "status": "ok"}
            try:
                config = _make_config(case, dt, interp, grid, config_overrides)
                state, h_s, m_err, e_err = _simulate(case, grid, config, days)
                if case.has_exact_solution:
                    ref = exact_solution(case, state.time, grid, EARTH)
                elif ref_field is not None:
                    ref = restrict_reference(ref_field, grid)
                else:
                    ref = None
                if ref is not None:
                    _, row["l2"], _ = error_norms(state.h, ref)
                else:
                    row["l2"] = math.nan
                row["mass_err"], row["energy_err"] = m_err, e_err
            except NumericalAbort as e:
                row["status"] = f"abort: {e}"
                row.update(l2=math.nan, mass_err=math.nan, energy_err=math.nan)
            rows.append(row)
    return rows


def write_table(rows: list[dict], path: str | Path) -> None:
    cols: list[str] = []
    for r in rows:
        for k in r:
            if k not in cols:
                cols.append(k)
    with open(path, "w") as f:
        f.write(",".join(cols) + "\n")
        for r in rows:
            f.write(",".join(str(r.get(c, "")) for c in cols) + "\n")


def parse_study_spec(path: str | Path) -> dict:
    spec: dict = {}
    for line in Path(path).read_text().splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        key, _, val = line.partition(":")
        spec[key.strip()] = val.strip()
    return spec


def run_study_file(path: str | Path, out_csv: str | Path) -> list[dict]:
    spec = parse_study_spec(path)
    kind = spec.get("kind", "temporal")
    common = dict(
        case_tag=spec["case"],
        interp_list=[s.strip() for s in spec["interps"].split(",")],
        days=float(spec.get("days", 1.0)),
        grid_kind=spec.get("grid", "0"),
    )
    if kind == "temporal":
        rows = temporal_study(
            J=int(spec["J"]),
            dt_list=[float(s) for s in spec["dts"].split(",")],
            **common,
        )
    elif kind == "spatial":
        rows = spatial_study(
            J_list=[int(s) for s in spec["Js"].split(",")],
            dt=float(spec["dt"]),
            reference=spec.get("reference"),
            **common,
        )
    else:
        raise ValueError(f"unknown study kind {kind!r}")
    write_table(rows, out_csv)
    return rows


def main(argv=None) -> int:
    import argparse

    p = argparse.ArgumentParser(prog="dfsswe-study")
    p.add_argument("spec", help="study spec file (key: value lines)")
    p.add_argument("out", help="output CSV path")
    args = p.parse_args(argv)
    run_study_file(args.spec, args.out)
    return 0


if __name__ == "__main__":
    import sys

    sys.exit(main())
