import subprocess
import sys
from pathlib import Path

import numpy as np
import pytest

from dfsswe.cli import main, parse_config
from dfsswe.snapshots import read_metrics, read_snapshot


def test_parse_config_defaults():
    case, grid, config, out = parse_config(
        "--case tc2 --grid 0 --J 80 --dt 600 --days 5 --interp dfs".split()
    )
    assert case.tag == "tc2"
    assert grid.J == 80
    assert config.trunc_n == 78  # N = J - 2
    assert config.interp_method == "dfs"
    assert config.M0 == 20
    assert config.beta_v == 1.0 and config.beta_h == 1.0
    assert out["days"] == 5.0


def test_parse_config_trunc_default_scales_with_j():
    *_, config, _ = parse_config("--case tc1 --grid m1 --J 320 --dt 600 --days 1".split()), None
    case, grid, config, out = parse_config(
        "--case tc1 --grid m1 --J 320 --dt 600 --days 1".split()
    )
    assert config.trunc_n == 318


def test_parse_config_rejects_bad_flags():
    with pytest.raises(SystemExit) as e:
        parse_config("--case tc2 --grid 0 --J 80 --dt 600 --days 5 --interp spline".split())
    assert e.value.code == 2
    with pytest.raises(SystemExit):
        parse_config("--case tc2 --grid 0 --J 81 --dt 600 --days 5".split())
    with pytest.raises(SystemExit):
        parse_config("--grid 0 --J 80 --dt 600 --days 5".split())  # missing case


def test_run_writes_metrics_and_snapshots(tmp_path):
    rc = main(
        f"--case tc2 --grid 0 --J 16 --dt 1800 --days 0.125 --interp lag5 "
        f"--out {tmp_path} --threads 1".split()
    )
    assert rc == 0
    metrics = read_metrics(tmp_path / "metrics.csv")
    assert metrics["step"].size == 6  # 0.125 days / 1800 s
    assert np.all(np.diff(metrics["time_s"]) > 0)
    assert np.all(np.isfinite(metrics["l2"]))
    field, meta = read_snapshot(tmp_path / "h_final.bin")
    assert meta["field"] == "h"
    assert field.values.shape == (16, 32)
    # file starts with a self-describing single-line header
    first = (tmp_path / "h_final.bin").read_bytes().split(b"\n", 1)[0].decode()
    assert "J:16" in first and "grid:0" in first and "time_s:" in first


def test_run_determinism_excluding_wallclock(tmp_path):
    argv = (
        f"--case tc5 --grid 0 --J 16 --dt 1800 --days 0.1 --interp dfs --threads 1"
    ).split()
    outs = []
    for sub in ("a", "b"):
        d = tmp_path / sub
        rc = main(argv + ["--out", str(d)])
        assert rc == 0
        rows = [
            ",".join(line.split(",")[:-1])
            for line in (d / "metrics.csv").read_text().splitlines()
            if not line.startswith("#")
        ]
        outs.append("\n".join(rows))
    assert outs[0] == outs[1]


def test_final_norms_match_library(tmp_path, capsys):
    rc = main(
        f"--case tc2 --grid 0 --J 16 --dt 1800 --days 0.1 --interp lag5 "
        f"--out {tmp_path}".split()
    )
    assert rc == 0
    printed = capsys.readouterr().out
    metrics = read_metrics(tmp_path / "metrics.csv")
    import re

    m = re.search(r"l2=([0-9.e+-]+)", printed)
    assert m is not None
    assert float(m.group(1)) == pytest.approx(metrics["l2"][-1], rel=1e-14)


def test_console_entry_point(tmp_path):
    proc = subprocess.run(
        [sys.executable, "-m", "dfsswe.cli", "--case", "tc2", "--grid", "0",
         "--J", "16", "--dt", "3600", "--days", "0.05"],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0
    assert "mass drift" in proc.stdout


def test_snapshot_roundtrip(tmp_path):
    from dfsswe.fields import scalar_field
    from dfsswe.grid import GridKind, build_grid
    from dfsswe.snapshots import write_snapshot

    g = build_grid(GridKind.GRID_M1, 8)
    rng = np.random.default_rng(0)
    f = scalar_field(g, rng.standard_normal(g.shape))
    write_snapshot(tmp_path / "x.bin", f, "h", "m", 123.0, {"case": "tc5"})
    back, meta = read_snapshot(tmp_path / "x.bin")
    assert np.array_equal(back.values, f.values)
    assert meta["time_s"] == 123.0
    assert meta["case"] == "tc5"


def test_snapshot_rejects_malformed(tmp_path):
    p = tmp_path / "bad.bin"
    p.write_bytes(b"field:h grid:0 J:8 N_lat:8 M_lon:16 time_s:0.0 units:m\n" + b"\x00" * 9)
    with pytest.raises(ValueError):
        read_snapshot(p)
