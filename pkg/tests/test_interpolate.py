import numpy as np
import pytest

from dfsswe.fields import FieldParity, GridField, scalar_field, vector_field
from dfsswe.grid import GridKind, build_grid
from dfsswe.interpolate import (
    dfs_interp,
    dfs_interp_many,
    dfs_interp_vector,
    lagrange_interp,
    normalize_sphere_points,
)
from dfsswe.transforms import synthesize_std

from helpers import random_std

ALL_KINDS = [GridKind.GRID_M1, GridKind.GRID_0, GridKind.GRID_1]


def mesh(grid):
    return np.meshgrid(grid.colatitudes, grid.longitudes, indexing="ij")


def test_normalize_points():
    th, ph = normalize_sphere_points(np.array([-0.1, np.pi + 0.2]), np.array([0.0, 1.0]))
    assert th[0] == pytest.approx(0.1)
    assert ph[0] == pytest.approx(np.pi)
    assert th[1] == pytest.approx(np.pi - 0.2)
    assert ph[1] == pytest.approx(1.0 + np.pi)


@pytest.mark.parametrize("kind", ALL_KINDS)
@pytest.mark.parametrize("degree", [3, 5])
def test_lagrange_exact_on_grid_nodes(kind, degree):
    g = build_grid(kind, 16)
    rng = np.random.default_rng(0)
    f = scalar_field(g, rng.standard_normal(g.shape))
    th, ph = mesh(g)
    pts = np.column_stack([th.ravel(), ph.ravel()])
    vals = lagrange_interp(f, pts, degree)
    assert np.allclose(vals, f.values.ravel(), atol=1e-12)


@pytest.mark.parametrize("degree", [3, 5])
def test_lagrange_polynomial_reproduction(degree):
    # polynomials in (theta, phi) of degree <= `degree` are reproduced exactly
    # away from the longitude wrap seam
    g = build_grid(GridKind.GRID_0, 24)
    th, ph = mesh(g)
    f = scalar_field(g, (th - 1.0) ** degree + 0.3 * (ph - np.pi) ** degree + th * ph)
    rng = np.random.default_rng(1)
    K = 300
    pts = np.column_stack(
        [rng.uniform(0.5, np.pi - 0.5, K), rng.uniform(0.8, 2 * np.pi - 0.8, K)]
    )
    vals = lagrange_interp(f, pts, degree)
    expect = (pts[:, 0] - 1.0) ** degree + 0.3 * (pts[:, 1] - np.pi) ** degree + pts[:, 0] * pts[:, 1]
    assert np.abs(vals - expect).max() <= 1e-12 * np.abs(expect).max()


@pytest.mark.parametrize("kind", ALL_KINDS)
def test_lagrange_constant_across_poles(kind):
    g = build_grid(kind, 12)
    f = scalar_field(g, np.full(g.shape, 3.7))
    rng = np.random.default_rng(2)
    pts = np.column_stack(
        [
            np.concatenate([rng.uniform(0, 0.05, 50), rng.uniform(np.pi - 0.05, np.pi, 50)]),
            rng.uniform(0, 2 * np.pi, 100),
        ]
    )
    vals = lagrange_interp(f, pts, 5)
    assert np.allclose(vals, 3.7, atol=1e-12)


def test_lagrange_smooth_field_across_pole():
    # a smooth scalar (cos(theta)-type) interpolated right at/near the pole
    g = build_grid(GridKind.GRID_0, 32)
    th, ph = mesh(g)
    f = scalar_field(g, np.cos(th))
    pts = np.array([[0.001, 1.0], [0.0, 2.0], [np.pi - 0.001, 3.0]])
    vals = lagrange_interp(f, pts, 5)
    assert np.abs(vals - np.cos(pts[:, 0])).max() <= 1e-8


def test_lagrange_vector_sign_flip_across_pole():
    # u = sin(theta)*cos(... solid-body zonal wind is a vector component whose
    # doubled-sphere continuation flips sign; quintic interpolation across the
    # pole must honor that
    g = build_grid(GridKind.GRID_0, 32)
    th, ph = mesh(g)
    u = vector_field(g, np.sin(th) * np.ones_like(ph))
    pts = np.array([[0.002, 0.5], [np.pi - 0.002, 4.0]])
    vals = lagrange_interp(u, pts, 5)
    assert np.abs(vals - np.sin(pts[:, 0])).max() <= 1e-7


def test_lagrange_empty_points():
    g = build_grid(GridKind.GRID_0, 8)
    f = scalar_field(g, np.ones(g.shape))
    assert lagrange_interp(f, np.zeros((0, 2)), 5).size == 0


def test_lagrange_linearity():
    g = build_grid(GridKind.GRID_0, 12)
    rng = np.random.default_rng(3)
    A = rng.standard_normal(g.shape)
    B = rng.standard_normal(g.shape)
    pts = np.column_stack([rng.uniform(0, np.pi, 64), rng.uniform(0, 2 * np.pi, 64)])
    va = lagrange_interp(scalar_field(g, A), pts, 5)
    vb = lagrange_interp(scalar_field(g, B), pts, 5)
    vab = lagrange_interp(scalar_field(g, 2.0 * A - 0.3 * B), pts, 5)
    assert np.allclose(vab, 2.0 * va - 0.3 * vb, atol=1e-12 * (1 + np.abs(vab).max()))


# ------------------------------------------------------------------- spectral


@pytest.mark.parametrize("kind", ALL_KINDS)
def test_dfs_interp_roundtrip_at_nodes(kind):
    g = build_grid(kind, 16)
    N, M = g.J - 2, g.J - 1
    rng = np.random.default_rng(4)
    # band-limited field in the pole-regular subspace
    from dfsswe.transforms import pr_to_std, synthesize_pr
    from helpers import random_pr

    pr = random_pr(rng, N, M)
    f = synthesize_pr(pr, g)
    th, ph = mesh(g)
    pts = np.column_stack([th.ravel(), ph.ravel()])
    vals = dfs_interp(f, pts, M, N, None, 1e-12)
    scale = np.abs(f.values).max()
    assert np.abs(vals - f.values.ravel()).max() <= 1e-10 * scale


def test_dfs_interp_closed_form_point():
    g = build_grid(GridKind.GRID_0, 24)
    N, M = g.J - 2, g.J - 1
    th, ph = mesh(g)
    f = scalar_field(g, np.sin(th) * np.cos(ph))
    val = dfs_interp(f, np.array([[np.pi / 3, np.pi / 4]]), M, N, None, 1e-13)
    assert val[0] == pytest.approx(np.sin(np.pi / 3) * np.cos(np.pi / 4), abs=1e-11)


def test_dfs_interp_pole_continuity():
    # zonal-dominant smooth field: azimuthal spread of the interpolant near the
    # pole collapses to the NUFFT/projection noise floor
    g = build_grid(GridKind.GRID_0, 32)
    N, M = g.J - 2, g.J - 1
    th, ph = mesh(g)
    f = scalar_field(
        g,
        np.cos(th) + 0.5 * np.cos(th) ** 3 + 1e-4 * np.sin(th) ** 2 * np.cos(2 * ph),
    )
    phis = np.linspace(0, 2 * np.pi, 64, endpoint=False)
    pts = np.column_stack([np.full(64, 1e-6), phis])
    vals = dfs_interp(f, pts, M, N, None, 1e-13)
    assert vals.max() - vals.min() <= 1e-8 * np.abs(vals).max()


def test_dfs_interp_vector_solid_body():
    g = build_grid(GridKind.GRID_0, 24)
    N, M = g.J - 2, g.J - 1
    th, ph = mesh(g)
    u = vector_field(g, 37.0 * np.sin(th))
    v = vector_field(g, np.zeros(g.shape))
    rng = np.random.default_rng(5)
    pts = np.column_stack([rng.uniform(0, np.pi, 200), rng.uniform(0, 2 * np.pi, 200)])
    uv, vv = dfs_interp_vector(u, v, pts, M, N, None, 1e-12)
    assert np.abs(uv - 37.0 * np.sin(pts[:, 0])).max() <= 1e-10 * 37.0
    assert np.abs(vv).max() <= 1e-10 * 37.0


def test_dfs_interp_zero_wind():
    g = build_grid(GridKind.GRID_0, 16)
    u = vector_field(g, np.zeros(g.shape))
    v = vector_field(g, np.zeros(g.shape))
    pts = np.array([[0.3, 0.4], [2.0, 5.0]])
    uv, vv = dfs_interp_vector(u, v, pts, g.J - 1, g.J - 2)
    assert np.abs(uv).max() == 0.0 and np.abs(vv).max() == 0.0


def test_dfs_interp_rotated_wind_pole_crossing():
    # solid-body wind about a tilted axis, interpolated along a meridian
    # passing over the pole: components stay continuous
    g = build_grid(GridKind.GRID_0, 32)
    N, M = g.J - 2, g.J - 1
    th, ph = mesh(g)
    alpha = 0.7
    u0 = 10.0
    u = vector_field(g, u0 * (np.cos(alpha) * np.sin(th) + np.sin(alpha) * np.cos(th) * np.cos(ph)))
    v = vector_field(g, -u0 * np.sin(alpha) * np.sin(ph))
    eps_th = 1e-5
    pts = np.array([[eps_th, 1.2], [eps_th, 1.2 + np.pi]])
    uv, vv = dfs_interp_vector(u, v, pts, M, N, None, 1e-12)
    # crossing the pole flips the local components (up to the genuine O(theta)
    # variation of the field between the two probe points)
    assert uv[0] == pytest.approx(-uv[1], abs=5 * eps_th * u0)
    assert vv[0] == pytest.approx(-vv[1], abs=5 * eps_th * u0)
    # and matches the analytic field
    for i in range(2):
        t, f = pts[i]
        assert uv[i] == pytest.approx(
            u0 * (np.cos(alpha) * np.sin(t) + np.sin(alpha) * np.cos(t) * np.cos(f)),
            abs=1e-8 * u0,
        )
