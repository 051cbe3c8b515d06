"""Command-line runner: configure a test case, march it in time, persist
metrics and snapshots.

Exit codes: 0 success, 2 configuration error, 3 numerical abort.
"""

from __future__ import annotations

import argparse
import sys
import time
from dataclasses import asdict
from pathlib import Path

import numpy as np

from . import __version__
from .cases import exact_solution, init_state, make_case
from .constants import EARTH
from .diagnostics import energy, error_norms, mass
from .grid import GridKind, build_grid
from .snapshots import MetricsWriter, write_snapshot
from .stepper import NumericalAbort, SislConfig, advance_step

_GRID_KINDS = {"m1": GridKind.GRID_M1, "0": GridKind.GRID_0, "1": GridKind.GRID_1}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="dfsswe",
        description="Semi-implicit semi-Lagrangian shallow-water solver on the sphere",
    )
    p.add_argument("--case", required=True, choices=["tc1", "tc2", "tc5", "tc6", "galewsky"])
    p.add_argument("--grid", default="0", choices=sorted(_GRID_KINDS))
    p.add_argument("--J", type=int, required=True, help="latitude resolution parameter (even)")
    p.add_argument("--trunc-n", type=int, default=None, help="colatitude truncation (default J-2)")
    p.add_argument("--dt", type=float, required=True, help="time step (s)")
    p.add_argument("--days", type=float, required=True, help="integration length (days)")
    p.add_argument("--interp", default="dfs", choices=["lag3", "lag5", "dfs"])
    p.add_argument("--nufft-eps", type=float, default=1e-12)
    p.add_argument("--m0", type=int, default=20, help="zonal filter base wavenumber")
    p.add_argument("--beta-v", type=float, default=1.0)
    p.add_argument("--beta-h", type=float, default=1.0)
    p.add_argument("--h-bar", type=float, default=None, help="linearization depth (m)")
    p.add_argument("--snapshot-every", type=int, default=0, help="steps between snapshots (0 = final only)")
    p.add_argument("--out", default=None, help="output directory (default: no files)")
    p.add_argument("--seed", type=int, default=0, help="seed echoed into outputs")
    p.add_argument("--threads", type=int, default=1, help="cap on internal data parallelism")
    return p


def parse_config(argv: list[str]):
    """Parse flags into (case, grid, SislConfig, output options)."""
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.J < 4 or args.J % 2:
        parser.error(f"--J must be even and >= 4, got {args.J}")
    if args.days <= 0:
        parser.error("--days must be positive")
    case = make_case(args.case)
    grid = build_grid(_GRID_KINDS[args.grid], args.J)
    trunc_n = args.trunc_n if args.trunc_n is not None else args.J - 2
    config = SislConfig(
        dt=args.dt,
        beta_v=args.beta_v,
        beta_h=args.beta_h,
        h_bar=args.h_bar,
        interp_method=args.interp,
        nufft_eps=args.nufft_eps,
        M0=args.m0,
        trunc_n=trunc_n,
        rotation_axis=case.rotation_axis,
        advect_only=case.advect_only,
    )
    out = {
        "days": args.days,
        "out_dir": args.out,
        "snapshot_every": args.snapshot_every,
        "seed": args.seed,
        "threads": args.threads,
    }
    return case, grid, config, out


def _config_echo(case, grid, config, out) -> list[str]:
    lines = [
        f"dfsswe version {__version__}",
        f"case:{case.tag} grid:{grid.kind.value} J:{grid.J} N_lat:{grid.n_lat} M_lon:{grid.m_lon}",
        f"dt:{config.dt} days:{out['days']} interp:{config.interp_method} "
        f"trunc_n:{config.trunc_n} m0:{config.M0} nufft_eps:{config.nufft_eps}",
        f"beta_v:{config.beta_v} beta_h:{config.beta_h} h_bar:{config.h_bar}",
        f"constants a:{EARTH.a} Omega:{EARTH.Omega} g:{EARTH.g}",
        f"seed:{out['seed']} threads:{out['threads']}",
    ]
    return lines


def run(case, grid, config: SislConfig, out: dict) -> int:
    """Time loop with per-step metrics; returns the process exit code."""
    import dfsswe.stepper

    n_steps = int(round(out["days"] * 86400.0 / config.dt))
    state, h_s = init_state(case, grid, EARTH)
    mass0 = mass(state, h_s, EARTH)
    energy0 = energy(state, h_s, EARTH)

    out_dir = Path(out["out_dir"]) if out["out_dir"] else None
    writer = None
    if out_dir is not None:
        out_dir.mkdir(parents=True, exist_ok=True)
        writer = MetricsWriter(out_dir / "metrics.csv", _config_echo(case, grid, config, out))

    def snapshot(state, tag):
        if out_dir is None:
            return
        extra = {"case": case.tag, "version": __version__}
        write_snapshot(out_dir / f"h_{tag}.bin", state.h, "h", "m", state.time, extra)
        write_snapshot(out_dir / f"u_{tag}.bin", state.u, "u", "m/s", state.time, extra)
        write_snapshot(out_dir / f"v_{tag}.bin", state.v, "v", "m/s", state.time, extra)

    t_start = time.perf_counter()
    status = 0
    last_norms = (None, None, None)
    try:
        for step in range(1, n_steps + 1):
            state = advance_step(state, config, EARTH, h_s)
            norms = (None, None, None)
            if case.has_exact_solution:
                ref = exact_solution(case, state.time, grid, EARTH)
                norms = error_norms(state.h, ref)
            last_norms = norms
            mass_err = abs(mass(state, h_s, EARTH) - mass0) / abs(mass0)
            energy_err = abs(energy(state, h_s, EARTH) - energy0) / abs(energy0)
            if writer:
                writer.write_row(
                    step, state.time, *norms, mass_err, energy_err,
                    time.perf_counter() - t_start,
                )
            if out["snapshot_every"] and step % out["snapshot_every"] == 0:
                snapshot(state, f"step{step:06d}")
    except NumericalAbort as e:
        print(f"numerical abort: {e}", file=sys.stderr)
        status = 3
    finally:
        if status == 0:
            snapshot(state, "final")
        if writer:
            writer.close()

    wall = time.perf_counter() - t_start
    mass_err = abs(mass(state, h_s, EARTH) - mass0) / abs(mass0)
    energy_err = abs(energy(state, h_s, EARTH) - energy0) / abs(energy0)
    print(f"case {case.tag}: {state.time / 86400.0:.3f} days in {wall:.1f} s wallclock")
    if case.has_exact_solution and last_norms[0] is not None:
        print(
            "final error norms vs exact: "
            f"l1={last_norms[0]:.16e} l2={last_norms[1]:.16e} linf={last_norms[2]:.16e}"
        )
    print(f"mass drift {mass_err:.6e} relative, energy drift {energy_err:.6e} relative")
    return status


def main(argv: list[str] | None = None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    try:
        case, grid, config, out = parse_config(argv)
    except SystemExit as e:
        # argparse exits with 2 on usage errors already
        return int(e.code) if e.code else 0
    try:
        import numba

        numba.set_num_threads(max(1, out["threads"]))
    except ImportError:
        pass
    import scipy.fft

    with scipy.fft.set_workers(max(1, out["threads"])):
        return run(case, grid, config, out)


if __name__ == "__main__":
    sys.exit(main())
