import numpy as np
import pytest

from dfsswe.cases import DAY, exact_solution, init_state, make_case
from dfsswe.constants import EARTH
from dfsswe.fields import FieldParity, GridField, constant_field
from dfsswe.grid import GridKind, build_grid
from dfsswe.stepper import (
    ModelState,
    NumericalAbort,
    SislConfig,
    advance_step,
    assemble_rv_rh,
    compute_departure_points,
    great_circle_move,
    initial_state,
    rotation_entries,
    semi_implicit_solve,
    settls_extrapolate,
)

A = EARTH.a


def rest_state(grid, h0=1000.0):
    return initial_state(
        constant_field(grid, h0),
        GridField(grid, FieldParity.VECTOR, np.zeros(grid.shape)),
        GridField(grid, FieldParity.VECTOR, np.zeros(grid.shape)),
    )


def test_settls_extrapolate():
    g = build_grid(GridKind.GRID_0, 8)
    now = constant_field(g, 2.0)
    prev = constant_field(g, 1.0)
    assert np.all(settls_extrapolate(now, prev).values == 3.0)
    assert np.all(settls_extrapolate(now, now).values == now.values)
    # linear-in-time sequence extrapolates exactly
    x0, x1 = constant_field(g, 5.0), constant_field(g, 7.5)
    assert np.all(settls_extrapolate(x1, x0).values == 10.0)


def test_rotation_entries_identity_and_pole_crossing():
    th = np.array([0.4, 1.1])
    ph = np.array([0.2, 5.0])
    p, q = rotation_entries(th, ph, th, ph)
    assert np.allclose(p, 1.0, atol=1e-15)
    assert np.allclose(q, 0.0, atol=1e-15)
    # transport over the pole flips both components
    eps = 1e-3
    p, q = rotation_entries(np.array([eps]), np.array([0.0]), np.array([eps]), np.array([np.pi]))
    assert p[0] == pytest.approx(-1.0, abs=1e-5)


def test_great_circle_move_along_equator():
    r = np.array([[1.0, 0.0, 0.0]])
    d = np.array([[0.0, 0.3, 0.0]])
    out = great_circle_move(r, d)
    assert np.allclose(out, [[np.cos(0.3), np.sin(0.3), 0.0]], atol=1e-15)


def test_departure_zero_wind():
    g = build_grid(GridKind.GRID_0, 16)
    state = rest_state(g)
    cfg = SislConfig(dt=600.0)
    dep = compute_departure_points(state, cfg, EARTH)
    th, ph = np.meshgrid(g.colatitudes, g.longitudes, indexing="ij")
    assert np.abs(dep.theta - th.ravel()).max() <= 1e-12
    assert np.allclose(dep.p, 1.0, atol=1e-12)
    assert np.allclose(dep.q, 0.0, atol=1e-12)
    assert np.abs(dep.p**2 + dep.q**2 - 1.0).max() <= 1e-12


def test_departure_constant_zonal_wind_on_equator():
    g = build_grid(GridKind.GRID_M1, 32)  # has an equator row
    th, ph = np.meshgrid(g.colatitudes, g.longitudes, indexing="ij")
    u0 = 40.0
    state = initial_state(
        constant_field(g, 1000.0),
        GridField(g, FieldParity.VECTOR, u0 * np.sin(th)),
        GridField(g, FieldParity.VECTOR, np.zeros(g.shape)),
    )
    dt = 1800.0
    cfg = SislConfig(dt=dt, advect_only=True)
    dep = compute_departure_points(state, cfg, EARTH)
    i_eq = np.argmin(np.abs(g.colatitudes - np.pi / 2))
    row = slice(i_eq * g.m_lon, (i_eq + 1) * g.m_lon)
    expect_phi = np.mod(g.longitudes - u0 * dt / A, 2 * np.pi)
    # the trajectory iteration is exact on the great circle up to its
    # third-order-per-step kinematic truncation (u0 dt / a)^3
    alpha = u0 * dt / A
    assert np.abs(dep.theta[row] - np.pi / 2).max() <= 1e-12
    assert np.abs(dep.phi[row] - expect_phi).max() <= alpha**3
    assert np.abs(dep.p**2 + dep.q**2 - 1.0).max() <= 1e-12


def test_departure_cfl_violation_reported():
    g = build_grid(GridKind.GRID_0, 8)
    th, _ = np.meshgrid(g.colatitudes, g.longitudes, indexing="ij")
    state = initial_state(
        constant_field(g, 1000.0),
        GridField(g, FieldParity.VECTOR, 500.0 * np.sin(th)),
        GridField(g, FieldParity.VECTOR, np.zeros(g.shape)),
    )
    cfg = SislConfig(dt=50000.0, advect_only=True)
    with pytest.raises(NumericalAbort):
        compute_departure_points(state, cfg, EARTH)


def test_rest_state_fixed_point():
    g = build_grid(GridKind.GRID_0, 16)
    state = rest_state(g, h0=1200.0)
    hs = constant_field(g, 0.0)
    for method, tol in (("lag5", 1e-12), ("dfs", 1e-10)):
        cfg = SislConfig(dt=900.0, interp_method=method)
        new = advance_step(state, cfg, EARTH, hs)
        assert np.abs(new.h.values - 1200.0).max() <= tol * 1200.0
        assert np.abs(new.u.values).max() <= tol * 1200.0
        assert np.abs(new.v.values).max() <= tol * 1200.0


def test_assemble_rest_rv_zero_rh_h():
    g = build_grid(GridKind.GRID_0, 16)
    state = rest_state(g, h0=800.0)
    hs = constant_field(g, 0.0)
    cfg = SislConfig(dt=600.0, interp_method="lag5")
    dep = compute_departure_points(state, cfg, EARTH)
    rvu, rvv, rh, info = assemble_rv_rh(state, dep, cfg, EARTH, hs)
    assert np.abs(rvu.values).max() <= 1e-10
    assert np.abs(rvv.values).max() <= 1e-10
    assert np.abs(rh.values - 800.0).max() <= 1e-10
    assert info["h_extrapolation_in_Pv"] is False


def test_beta_flag_set_when_decentering_off():
    g = build_grid(GridKind.GRID_0, 16)
    state = rest_state(g)
    hs = constant_field(g, 0.0)
    cfg = SislConfig(dt=600.0, beta_v=0.5, interp_method="lag5")
    dep = compute_departure_points(state, cfg, EARTH)
    *_, info = assemble_rv_rh(state, dep, cfg, EARTH, hs)
    assert info["h_extrapolation_in_Pv"] is True


def test_semi_implicit_rest():
    g = build_grid(GridKind.GRID_0, 16)
    cfg = SislConfig(dt=600.0)
    H = 1500.0
    rv0 = GridField(g, FieldParity.VECTOR, np.zeros(g.shape))
    out_h, out_u, out_v, out_div = semi_implicit_solve(
        rv0, rv0.copy(), constant_field(g, H), cfg, EARTH, h_bar=H
    )
    assert np.abs(out_h.values - H).max() <= 1e-11 * H
    assert np.abs(out_u.values).max() <= 1e-11
    assert np.abs(out_div.values).max() <= 1e-16


def test_semi_implicit_consistency_with_momentum_equation():
    # v+ + (beta dt/2) g grad h+ must reproduce R_v for smooth random R
    from scipy.special import lpmv

    g = build_grid(GridKind.GRID_0, 32)
    cfg = SislConfig(dt=600.0)
    rng = np.random.default_rng(7)
    th, ph = np.meshgrid(g.colatitudes, g.longitudes, indexing="ij")
    rvu = np.zeros(g.shape)
    rvv = np.zeros(g.shape)
    rh = np.full(g.shape, 2000.0)
    for _ in range(12):
        l = int(rng.integers(1, 9))
        m = int(rng.integers(0, l + 1))
        y = lpmv(m, l, np.cos(th)) * np.cos(m * ph + rng.uniform(0, 2 * np.pi))
        rvu += rng.standard_normal() * np.sin(th) * y
        rvv += rng.standard_normal() * np.sin(th) * y
        rh += 10.0 * rng.standard_normal() * y
    h_bar = 2000.0
    h_new, u_new, v_new, _ = semi_implicit_solve(
        GridField(g, FieldParity.VECTOR, rvu),
        GridField(g, FieldParity.VECTOR, rvv),
        GridField(g, FieldParity.SCALAR, rh),
        cfg,
        EARTH,
        h_bar,
    )
    from dfsswe.operators import gradient_uv
    from dfsswe.transforms import analyze_pr

    gh_u, gh_v = gradient_uv(analyze_pr(h_new, g.J - 1, g.J - 2), g, EARTH)
    fac = 0.5 * cfg.beta_v * cfg.dt * EARTH.g
    res_u = u_new.values + fac * gh_u.values - rvu
    res_v = v_new.values + fac * gh_v.values - rvv
    scale = np.abs(rvu).max() + np.abs(rvv).max()
    assert np.abs(res_u).max() <= 2e-6 * scale
    assert np.abs(res_v).max() <= 2e-6 * scale


def test_tc2_single_step_steadiness():
    g = build_grid(GridKind.GRID_M1, 80)
    case = make_case("tc2")
    state, hs = init_state(case, g, EARTH)
    cfg = SislConfig(dt=600.0, interp_method="lag5", rotation_axis=case.rotation_axis)
    new = advance_step(state, cfg, EARTH, hs)
    exact = exact_solution(case, new.time, g, EARTH)
    err = np.abs(new.h.values - exact.values).max() / np.abs(exact.values).max()
    assert err <= 1e-5


def test_dt_to_zero_limit():
    g = build_grid(GridKind.GRID_0, 24)
    case = make_case("tc2")
    state, hs = init_state(case, g, EARTH)
    cfg = SislConfig(dt=1e-3, interp_method="lag5", rotation_axis=case.rotation_axis)
    new = advance_step(state, cfg, EARTH, hs)
    for a, b in ((new.h, state.h), (new.u, state.u), (new.v, state.v)):
        scale = np.abs(b.values).max() + 1.0
        assert np.abs(a.values - b.values).max() <= 1e-8 * scale


def test_determinism_bit_identical():
    g = build_grid(GridKind.GRID_0, 24)
    case = make_case("tc5")
    state, hs = init_state(case, g, EARTH)
    cfg = SislConfig(dt=1200.0, interp_method="dfs")
    a = advance_step(state, cfg, EARTH, hs)
    b = advance_step(state, cfg, EARTH, hs)
    assert np.array_equal(a.h.values, b.h.values)
    assert np.array_equal(a.u.values, b.u.values)


def test_identical_departure_points_across_methods():
    g = build_grid(GridKind.GRID_0, 24)
    case = make_case("tc6")
    state, hs = init_state(case, g, EARTH)
    deps = []
    for method in ("lag5", "dfs"):
        cfg = SislConfig(dt=600.0, interp_method=method)
        deps.append(compute_departure_points(state, cfg, EARTH))
    assert np.array_equal(deps[0].theta, deps[1].theta)
    assert np.array_equal(deps[0].phi, deps[1].phi)


def test_nan_abort():
    g = build_grid(GridKind.GRID_0, 16)
    state = rest_state(g)
    state.h.values[3, 4] = np.nan
    cfg = SislConfig(dt=600.0, interp_method="lag5")
    with pytest.raises(NumericalAbort):
        advance_step(state, cfg, EARTH, constant_field(g, 0.0))


def test_config_validation():
    with pytest.raises(ValueError):
        SislConfig(dt=-1.0)
    with pytest.raises(ValueError):
        SislConfig(dt=600.0, beta_v=1.5)
    with pytest.raises(ValueError):
        SislConfig(dt=600.0, interp_method="spline")
    with pytest.raises(ValueError):
        SislConfig(dt=600.0, fp_iters=0)
