import numpy as np
import pytest

from dfsswe.cases import (
    DAY,
    exact_solution,
    galewsky_jet_u,
    init_state,
    make_case,
    _galewsky_height_profile,
)
from dfsswe.constants import EARTH
from dfsswe.fields import scalar_field
from dfsswe.grid import GridKind, build_grid
from dfsswe.operators import gradient_uv
from dfsswe.transforms import analyze_pr

A = EARTH.a


def test_tc1_bell_values():
    g = build_grid(GridKind.GRID_M1, 16)  # has nodes at the equator and 270E
    case = make_case("tc1")
    state, hs = init_state(case, g, EARTH)
    i_eq = np.argmin(np.abs(g.colatitudes - np.pi / 2))
    j_c = np.argmin(np.abs(g.longitudes - 3 * np.pi / 2))
    assert g.colatitudes[i_eq] == pytest.approx(np.pi / 2)
    assert state.h.values[i_eq, j_c] == pytest.approx(1000.0)
    # zero outside the bell radius (e.g. the antipode)
    j_far = np.argmin(np.abs(g.longitudes - np.pi / 2))
    assert state.h.values[i_eq, j_far] == 0.0
    assert np.abs(hs.values).max() == 0.0


def test_tc1_exact_solution_period():
    g = build_grid(GridKind.GRID_0, 16)
    case = make_case("tc1")
    state, _ = init_state(case, g, EARTH)
    h12 = exact_solution(case, 12 * DAY, g, EARTH)
    assert np.abs(h12.values - state.h.values).max() <= 1e-9 * 1000.0
    # half a period moves the bell to the antipode on the flow equator
    h6 = exact_solution(case, 6 * DAY, g, EARTH)
    overlap = np.minimum(h6.values, state.h.values)
    assert overlap.max() == 0.0  # disjoint supports
    assert h6.values.max() == pytest.approx(state.h.values.max(), rel=0.05)


def test_tc1_rotation_roundtrip():
    g = build_grid(GridKind.GRID_0, 12)
    case = make_case("tc1")
    t = 2.345 * DAY
    fwd = exact_solution(case, t, g, EARTH)
    # rotating back by -t is the identity on the initial field
    back = exact_solution(case, 0.0, g, EARTH)
    state, _ = init_state(case, g, EARTH)
    assert np.abs(back.values - state.h.values).max() <= 1e-13 * 1000.0
    assert np.abs(fwd.values - state.h.values).max() > 100.0  # actually moved


def test_tc2_exact_is_initial():
    g = build_grid(GridKind.GRID_0, 16)
    case = make_case("tc2")
    state, _ = init_state(case, g, EARTH)
    for t in (0.0, 3 * DAY, 11.7 * DAY):
        h = exact_solution(case, t, g, EARTH)
        assert np.array_equal(h.values, state.h.values)


def test_tc2_gradient_wind_balance():
    # for the tilted solid-body state, g grad h must balance the combined
    # Coriolis + curvature acceleration: g grad h = -(u0/a)(u0 + 2 Omega a)
    # * mu * tangential(axis), mu = axis . rhat
    g = build_grid(GridKind.GRID_0, 32)
    case = make_case("tc2")
    state, _ = init_state(case, g, EARTH)
    M, N = g.J - 1, g.J - 2
    gh_u, gh_v = gradient_uv(analyze_pr(state.h, M, N), g, EARTH)

    th, ph = np.meshgrid(g.colatitudes, g.longitudes, indexing="ij")
    st, ct = np.sin(th), np.cos(th)
    n = np.asarray(case.rotation_axis)
    mu = n[0] * st * np.cos(ph) + n[1] * st * np.sin(ph) + n[2] * ct
    # axis components in the local east/north frame
    n_e = -n[0] * np.sin(ph) + n[1] * np.cos(ph)
    n_n = -n[0] * ct * np.cos(ph) - n[1] * ct * np.sin(ph) + n[2] * st
    u0 = 2 * np.pi * A / (12 * DAY)
    coef = (u0 / A) * (u0 + 2 * EARTH.Omega * A)

    scale = np.abs(EARTH.g * gh_u.values).max() + np.abs(EARTH.g * gh_v.values).max()
    assert np.abs(EARTH.g * gh_u.values + coef * mu * n_e).max() <= 1e-9 * scale
    assert np.abs(EARTH.g * gh_v.values + coef * mu * n_n).max() <= 1e-9 * scale


def test_tc5_mountain_shape():
    g = build_grid(GridKind.GRID_0, 48)
    state, hs = init_state(make_case("tc5"), g, EARTH)
    assert hs.values.max() <= 2000.0
    assert hs.values.min() == 0.0
    # continuous: no jump larger than the node spacing allows
    d_lat = np.abs(np.diff(hs.values, axis=0)).max()
    d_lon = np.abs(np.diff(hs.values, axis=1)).max()
    slope_bound = 2000.0 / (np.pi / 9.0) * 1.5
    assert d_lat <= slope_bound * (np.pi / g.J)
    assert d_lon <= slope_bound * (2 * np.pi / g.m_lon)
    # fluid depth positive everywhere
    assert (state.h.values - hs.values).min() > 0.0


def test_tc6_fields_sane():
    g = build_grid(GridKind.GRID_0, 32)
    state, hs = init_state(make_case("tc6"), g, EARTH)
    assert np.abs(hs.values).max() == 0.0
    assert 8000.0 <= state.h.values.max() <= 11000.0
    assert state.h.values.min() >= 7000.0
    # wavenumber-4 pattern: h(lon + pi/2) == h(lon)
    q = g.m_lon // 4
    assert np.allclose(np.roll(state.h.values, q, axis=1), state.h.values, atol=1e-9)


def test_galewsky_jet_profile():
    lat = np.linspace(-np.pi / 2, np.pi / 2, 1001)
    u = galewsky_jet_u(lat)
    assert u.max() == pytest.approx(80.0, rel=1e-12)
    assert np.all(u[lat <= np.pi / 7] == 0.0)
    assert np.all(u[lat >= np.pi / 2 - np.pi / 7] == 0.0)


def test_galewsky_balance_against_dense_quadrature():
    # independent oracle: 10^4-panel composite two-point Gauss rule
    lats = np.linspace(-np.pi / 2, np.pi / 2, 7)[1:-1]
    mine = _galewsky_height_profile(lats, EARTH)

    a, Om = EARTH.a, EARTH.Omega

    def integrand(x):
        u = galewsky_jet_u(x)
        return a * u * (2 * Om * np.sin(x) + np.tan(x) * u / a)

    z2 = np.array([-1.0, 1.0]) / np.sqrt(3.0)
    for lat, val in zip(lats, mine):
        edges = np.linspace(-np.pi / 2, lat, 10001)
        mid = 0.5 * (edges[1:] + edges[:-1])
        half = 0.5 * (edges[1] - edges[0])
        ref = -(integrand(mid[:, None] + half * z2[None, :]).sum(axis=1) * half).sum()
        assert val == pytest.approx(ref, abs=1e-10 * max(1.0, abs(ref)) + 1e-6)


def test_galewsky_mean_depth_and_perturbation():
    g = build_grid(GridKind.GRID_0, 32)
    state, _ = init_state(make_case("galewsky", perturbed=False), g, EARTH)
    w = g.area_weights()
    mean = (w * state.h.values).sum() / w.sum()
    assert mean == pytest.approx(10000.0, abs=1e-6)
    pert, _ = init_state(make_case("galewsky", perturbed=True), g, EARTH)
    bump = pert.h.values - state.h.values
    assert 0.0 < bump.max() <= 120.0
    assert bump.min() >= -1e-9


def test_unknown_case_rejected():
    with pytest.raises(ValueError):
        make_case("tc3")
    g = build_grid(GridKind.GRID_0, 8)
    with pytest.raises(ValueError):
        exact_solution(make_case("tc5"), 0.0, g, EARTH)
