"""Two-time-level semi-implicit semi-Lagrangian time step.

One step advances (h, u, v) by: extrapolate to the future along SETTLS
lines, locate departure points by fixed-point iteration on the trajectory
equation, transport the slow terms to the departure points with the
configured interpolation (Lagrange or spectral), rotate transported wind
components into the arrival frame, solve the implicit gravity-wave system
via a Helmholtz solve for the divergence plus two Poisson solves for the
velocity potential/streamfunction, and finally apply the zonal filter to
the new prognostic fields.

Trajectory kinematics are evaluated in 3-D Cartesian form: interpolated
wind components are lifted onto the tangent plane at their own location
before they are combined, and displacements are applied as great-circle
rotations of the position vector.  Plane averaging of raw (u, v) pairs from
different locations would lose second-order accuracy near the poles.

Conventions: u eastward, v northward, colatitude theta; the first step of a
cold start uses previous-level copies of the current state (first-order
startup); the linearization height defaults to the initial area mean of the
fluid depth and stays frozen.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from .constants import PhysicalConstants
from .fields import FieldParity, GridField
from .grid import Grid
from .interpolate import (
    dfs_interp_many,
    lagrange_interp_many,
    normalize_sphere_points,
)
from .operators import (
    div_and_vort,
    gradient_uv,
    potentials_from_wind,
    sisl_implicit_modes,
    velocity_from_potentials,
    weighted_div_and_vort,
)
from .transforms import (
    analyze_pr,
    analyze_std,
    lincomb,
    project_pr,
    synthesize_pr,
    synthesize_std,
    zonal_filter,
)


class NumericalAbort(RuntimeError):
    """Simulation cannot continue (NaN/Inf field or CFL-like violation)."""


@dataclass
class SislConfig:
    dt: float
    beta_v: float = 1.0
    beta_h: float = 1.0
    h_bar: float | None = None  # linearization height; None -> mean depth at t=0
    interp_method: str = "dfs"  # 'lag3' | 'lag5' | 'dfs'
    nufft_eps: float = 1e-12
    M0: int | None = 20  # zonal-filter base wavenumber, None disables
    fp_iters: int = 3
    trunc_n: int | None = None  # default J - 2
    trunc_m: int | None = None  # default J - 1
    rotation_axis: tuple[float, float, float] = (0.0, 0.0, 1.0)
    advect_only: bool = False  # pure advection of h by the fixed wind
    filter_taper: float = 64.0  # polar sub-cutoff damping strength

    def __post_init__(self):
        if self.dt <= 0:
            raise ValueError("dt must be positive")
        if not (0.0 <= self.beta_v <= 1.0 and 0.0 <= self.beta_h <= 1.0):
            raise ValueError("decentering parameters must lie in [0, 1]")
        if self.fp_iters < 1:
            raise ValueError("fp_iters must be >= 1")
        if self.interp_method not in ("lag3", "lag5", "dfs"):
            raise ValueError(f"unknown interpolation method {self.interp_method!r}")

    def truncation(self, grid: Grid) -> tuple[int, int]:
        N = self.trunc_n if self.trunc_n is not None else grid.J - 2
        M = self.trunc_m if self.trunc_m is not None else grid.J - 1
        return M, N


@dataclass
class ModelState:
    time: float
    h: GridField
    u: GridField
    v: GridField
    h_prev: GridField
    u_prev: GridField
    v_prev: GridField
    div_prev: GridField | None = None  # divergence at t - dt
    div_now: GridField | None = None  # divergence at t, carried spectrally

    @property
    def grid(self) -> Grid:
        return self.h.grid


@dataclass
class DeparturePoints:
    theta: np.ndarray  # (K,) colatitudes of departure points
    phi: np.ndarray
    p: np.ndarray  # rotation-matrix entries, p^2 + q^2 = 1
    q: np.ndarray
    iterations: int = 0


def settls_extrapolate(x_now: GridField, x_prev: GridField) -> GridField:
    """Two-time-level extrapolation to t + dt: 2 x(t) - x(t - dt)."""
    if x_now.grid.cache_key != x_prev.grid.cache_key:
        raise ValueError("fields must share one grid")
    return GridField(x_now.grid, x_now.parity, 2.0 * x_now.values - x_prev.values)


# ---------------------------------------------------------------------------
# static per-grid geometry


@dataclass(frozen=True)
class _Frames:
    """Flattened local frames at the grid nodes."""

    theta: np.ndarray  # (K,)
    phi: np.ndarray
    r: np.ndarray  # (K, 3) unit position
    e_east: np.ndarray  # (K, 3)
    e_north: np.ndarray


_frames_cache: dict = {}


def _grid_frames(grid: Grid) -> _Frames:
    key = grid.cache_key
    if key not in _frames_cache:
        th, ph = np.meshgrid(grid.colatitudes, grid.longitudes, indexing="ij")
        th, ph = th.ravel(), ph.ravel()
        st, ct = np.sin(th), np.cos(th)
        sp, cp = np.sin(ph), np.cos(ph)
        r = np.column_stack([st * cp, st * sp, ct])
        e_east = np.column_stack([-sp, cp, np.zeros_like(sp)])
        e_north = np.column_stack([-ct * cp, -ct * sp, st])
        _frames_cache[key] = _Frames(th, ph, r, e_east, e_north)
    return _frames_cache[key]


def _frames_at(theta: np.ndarray, phi: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    st, ct = np.sin(theta), np.cos(theta)
    sp, cp = np.sin(phi), np.cos(phi)
    r = np.column_stack([st * cp, st * sp, ct])
    e_east = np.column_stack([-sp, cp, np.zeros_like(sp)])
    e_north = np.column_stack([-ct * cp, -ct * sp, st])
    return r, e_east, e_north


def coriolis_wind(
    grid: Grid, consts: PhysicalConstants, axis: tuple[float, float, float]
) -> tuple[GridField, GridField]:
    """(eastward, northward) components of Omega x r about a unit axis."""
    fr = _grid_frames(grid)
    n = np.asarray(axis, dtype=float)
    n = n / np.linalg.norm(n)
    cross = np.cross(np.broadcast_to(n, fr.r.shape), fr.r) * (consts.Omega * consts.a)
    u = (cross * fr.e_east).sum(axis=1).reshape(grid.shape)
    v = (cross * fr.e_north).sum(axis=1).reshape(grid.shape)
    return (
        GridField(grid, FieldParity.VECTOR, u),
        GridField(grid, FieldParity.VECTOR, v),
    )


def great_circle_move(r: np.ndarray, disp: np.ndarray) -> np.ndarray:
    """Rotate unit vectors ``r`` along the great circle in the direction of
    the (tangential part of the) displacement ``disp`` by angle |disp|."""
    tang = disp - (disp * r).sum(axis=1, keepdims=True) * r
    gamma = np.linalg.norm(tang, axis=1)
    out = r.copy()
    nz = gamma > 0
    out[nz] = np.cos(gamma[nz])[:, None] * r[nz] + (
        np.sin(gamma[nz]) / gamma[nz]
    )[:, None] * tang[nz]
    return out / np.linalg.norm(out, axis=1, keepdims=True)


def _to_angles(r: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    theta = np.arccos(np.clip(r[:, 2], -1.0, 1.0))
    phi = np.mod(np.arctan2(r[:, 1], r[:, 0]), 2.0 * np.pi)
    return theta, phi


def rotation_entries(
    theta_a: np.ndarray, phi_a: np.ndarray, theta_d: np.ndarray, phi_d: np.ndarray
) -> tuple[np.ndarray, np.ndarray]:
    """Entries (p, q) of the wind-rotation matrix between the departure and
    arrival local frames (Temperton & Staniforth form)."""
    sa, ca = np.sin(theta_a), np.cos(theta_a)
    sd, cd = np.sin(theta_d), np.cos(theta_d)
    dphi = phi_a - phi_d
    cos_eta = ca * cd + sa * sd * np.cos(dphi)
    denom = 1.0 + cos_eta
    p = (sa * sd + (1.0 + ca * cd) * np.cos(dphi)) / denom
    q = (ca + cd) * np.sin(dphi) / denom
    norm2 = p * p + q * q
    if np.abs(norm2 - 1.0).max() > 1e-10:
        raise NumericalAbort("degenerate trajectory rotation (antipodal departure?)")
    scale = 1.0 / np.sqrt(norm2)
    return p * scale, q * scale


def compute_departure_points(
    state: ModelState, config: SislConfig, consts: PhysicalConstants
) -> DeparturePoints:
    """Fixed-point iteration for the upstream positions of parcels arriving
    at the grid nodes, with quintic Lagrange interpolation of the trajectory
    wind and great-circle application of the displacement."""
    grid = state.grid
    dt = config.dt
    fr = _grid_frames(grid)
    M, N = config.truncation(grid)

    if config.advect_only:
        # steady prescribed wind: trapezoidal average of departure/arrival wind
        p_u = GridField(grid, FieldParity.VECTOR, 0.5 * state.u.values)
        p_v = GridField(grid, FieldParity.VECTOR, 0.5 * state.v.values)
        arr_u = -0.5 * state.u.values.ravel()
        arr_v = -0.5 * state.v.values.ravel()
    else:
        ucor, vcor = coriolis_wind(grid, consts, config.rotation_axis)
        pr_h0 = analyze_pr(state.h, M, N)
        pr_hp = lincomb(2.0, pr_h0, -1.0, analyze_pr(state.h_prev, M, N))
        gh0_u, gh0_v = gradient_uv(pr_h0, grid, consts)
        ghp_u, ghp_v = gradient_uv(pr_hp, grid, consts)
        gdt4 = consts.g * dt / 4.0
        p_u = GridField(grid, FieldParity.VECTOR, state.u.values + ucor.values - gdt4 * ghp_u.values)
        p_v = GridField(grid, FieldParity.VECTOR, state.v.values + vcor.values - gdt4 * ghp_v.values)
        arr_u = (ucor.values + gdt4 * gh0_u.values).ravel()
        arr_v = (vcor.values + gdt4 * gh0_v.values).ravel()

    v_arr = arr_u[:, None] * fr.e_east + arr_v[:, None] * fr.e_north

    # initial guess: departure displaced by the arrival wind
    disp0 = -(dt / consts.a) * (
        state.u.values.ravel()[:, None] * fr.e_east
        + state.v.values.ravel()[:, None] * fr.e_north
    )
    r_d = great_circle_move(fr.r, disp0)

    iterations = 0
    for it in range(config.fp_iters):
        theta_d, phi_d = _to_angles(r_d)
        pts = np.column_stack([theta_d, phi_d])
        u_d, v_d = lagrange_interp_many([p_u, p_v], pts, degree=5)
        rd_unit, e_e, e_n = _frames_at(theta_d, phi_d)
        bracket = u_d[:, None] * e_e + v_d[:, None] * e_n - v_arr
        disp = (dt / consts.a) * np.linalg.norm(bracket, axis=1)
        if disp.max() > np.pi / 2:
            raise NumericalAbort(
                f"departure displacement {disp.max():.3f} rad exceeds pi/2"
            )
        r_new = great_circle_move(fr.r, -(dt / consts.a) * bracket)
        step = np.abs(r_new - r_d).max()
        r_d = r_new
        iterations = it + 1
        if step < 1e-12:
            break

    theta_d, phi_d = _to_angles(r_d)
    p, q = rotation_entries(fr.theta, fr.phi, theta_d, phi_d)
    return DeparturePoints(theta_d, phi_d, p, q, iterations)


# ---------------------------------------------------------------------------
# right-hand-side assembly and the implicit solve


def reference_depth(h: GridField, h_s: GridField) -> float:
    """Default linearization depth: the maximum initial fluid depth.

    The leftover explicit term (beta h_bar - depth) must not change sign for
    the semi-implicit treatment to damp polar gravity waves; a mean-depth
    reference leaves a supercritical explicit residual wherever the local
    depth exceeds it."""
    return float((h.values - h_s.values).max())


def assemble_rv_rh(
    state: ModelState,
    dep: DeparturePoints,
    config: SislConfig,
    consts: PhysicalConstants,
    h_s: GridField,
) -> tuple[GridField, GridField, GridField, dict]:
    """Transported momentum/continuity right-hand sides (R_v as two wind
    components, R_h) plus an info dict of construction flags."""
    grid = state.grid
    dt = config.dt
    g = consts.g
    bv, bh = config.beta_v, config.beta_h
    M, N = config.truncation(grid)
    h_bar = config.h_bar if config.h_bar is not None else reference_depth(state.h, h_s)

    ucor, vcor = coriolis_wind(grid, consts, config.rotation_axis)
    pr_h0 = analyze_pr(state.h, M, N)
    gh0_u, gh0_v = gradient_uv(pr_h0, grid, consts)

    uses_h_extrapolation = bv != 1.0
    pvu = state.u.values + 2.0 * ucor.values - 0.5 * dt * g * bv * gh0_u.values
    pvv = state.v.values + 2.0 * vcor.values - 0.5 * dt * g * bv * gh0_v.values
    if uses_h_extrapolation:
        pr_hp = lincomb(2.0, pr_h0, -1.0, analyze_pr(state.h_prev, M, N))
        ghp_u, ghp_v = gradient_uv(pr_hp, grid, consts)
        pvu -= 0.5 * dt * g * (1.0 - bv) * ghp_u.values
        pvv -= 0.5 * dt * g * (1.0 - bv) * ghp_v.values

    # the divergence at t is carried from the previous implicit solve so the
    # explicit h-bar terms stay operator-consistent with the Helmholtz side
    if state.div_now is not None:
        delta0 = state.div_now.values
    else:
        delta0_pr, _ = div_and_vort(state.u, state.v, consts, M, N)
        delta0 = synthesize_pr(delta0_pr, grid).values
    delta_prev = state.div_prev.values if state.div_prev is not None else delta0
    delta_ext = 2.0 * delta0 - delta_prev

    pr_hs = analyze_pr(h_s, M, N)
    ghs_u, ghs_v = gradient_uv(pr_hs, grid, consts)
    u_ext = 2.0 * state.u.values - state.u_prev.values
    v_ext = 2.0 * state.v.values - state.v_prev.values
    adv_hs_ext = u_ext * ghs_u.values + v_ext * ghs_v.values
    adv_hs_now = state.u.values * ghs_u.values + state.v.values * ghs_v.values

    depth_coef = bh * h_bar - (state.h.values - h_s.values)
    ph = state.h.values + 0.5 * dt * (
        depth_coef * delta_ext + adv_hs_ext - bh * h_bar * delta0
    )

    pvu_f = GridField(grid, FieldParity.VECTOR, pvu)
    pvv_f = GridField(grid, FieldParity.VECTOR, pvv)
    ph_f = GridField(grid, FieldParity.SCALAR, ph)
    pts = np.column_stack([dep.theta, dep.phi])
    if config.interp_method == "dfs":
        vals = dfs_interp_many(
            [(pvu_f, pvv_f), ph_f], pts, M, N, config.M0, config.nufft_eps, consts
        )
    else:
        degree = 3 if config.interp_method == "lag3" else 5
        vals = lagrange_interp_many([pvu_f, pvv_f, ph_f], pts, degree)
    pvu_d, pvv_d, ph_d = (v.reshape(grid.shape) for v in vals)

    pg, qg = dep.p.reshape(grid.shape), dep.q.reshape(grid.shape)
    rvu = pg * pvu_d + qg * pvv_d - 2.0 * ucor.values
    rvv = -qg * pvu_d + pg * pvv_d - 2.0 * vcor.values
    if uses_h_extrapolation:
        rvu -= 0.5 * dt * g * (1.0 - bv) * gh0_u.values
        rvv -= 0.5 * dt * g * (1.0 - bv) * gh0_v.values

    rh = ph_d + 0.5 * dt * (depth_coef * delta0 + adv_hs_now)

    info = {
        "h_extrapolation_in_Pv": uses_h_extrapolation,
        "h_bar": h_bar,
        "delta0": GridField(grid, FieldParity.SCALAR, delta0),
    }
    return (
        GridField(grid, FieldParity.VECTOR, rvu),
        GridField(grid, FieldParity.VECTOR, rvv),
        GridField(grid, FieldParity.SCALAR, rh),
        info,
    )


def semi_implicit_solve(
    r_vu: GridField,
    r_vv: GridField,
    r_h: GridField,
    config: SislConfig,
    consts: PhysicalConstants,
    h_bar: float,
) -> tuple[GridField, GridField, GridField, GridField]:
    """Solve the implicit system for (h, u, v, divergence) at the new level.

    The divergence Helmholtz problem and the two potential Poisson problems
    are solved in the sin^2-premultiplied harmonic form so that the explicit
    and implicit sides share one family of truncated operators; mixing the
    exact-division operators into the right-hand side would destabilize the
    band-edge modes whose polar gravity-wave frequencies are far beyond the
    time step.
    """
    grid = r_h.grid
    dt = config.dt
    g = consts.g
    M, N = config.truncation(grid)

    bdiv, bvort = weighted_div_and_vort(r_vu, r_vv, consts, M, N)
    ch = analyze_std(r_h, M, N)
    c = config.beta_v * config.beta_h * dt * dt * g * h_bar / 4.0
    coef_rh = 0.5 * config.beta_v * dt * g
    delta_std, chi_std, psi_std = sisl_implicit_modes(bdiv, bvort, ch, c, coef_rh, consts)

    chi = project_pr(chi_std)
    psi = project_pr(psi_std)
    u_new, v_new = velocity_from_potentials(chi, psi, grid, consts)

    delta_vals = synthesize_std(delta_std, grid).values
    h_new = r_h.values - 0.5 * config.beta_h * dt * h_bar * delta_vals
    return (
        GridField(grid, FieldParity.SCALAR, h_new),
        u_new,
        v_new,
        GridField(grid, FieldParity.SCALAR, delta_vals),
    )


def _filter_field(
    f: GridField, M: int, N: int, M0: int | None, taper: float = 0.0
) -> GridField:
    """Zonal filter of prognostic grid values.

    On every colatitude ring, wavenumbers above ``min(M, M0 + M sin th)``
    are zeroed (a value-space ring mask: an orthogonal projection, so
    idempotent and non-expansive; re-expanding in a global basis here would
    leak polar content back).  Below the hard cutoff a latitude-weighted
    taper ``exp(-taper (1-sin th)^2 (m/M_zf)^4)`` supplies the mild polar
    damping that local Lagrange transport has intrinsically but exact
    spectral transport lacks; it decays to nothing away from the poles and
    for low wavenumbers.
    """
    import scipy.fft

    grid = f.grid
    fhat = scipy.fft.rfft(f.values, axis=1)
    m = np.arange(fhat.shape[1])
    if M0 is None:
        return f.copy()
    cutoff = np.minimum(float(M), M0 + M * np.sin(grid.colatitudes))
    fhat[m[None, :] > cutoff[:, None]] = 0.0
    if taper > 0.0 and M > M0:
        cap = np.maximum(0.0, (M - cutoff) / (M - M0))
        gamma = taper * cap**4
        fhat *= np.exp(-gamma[:, None] * (m[None, :] / cutoff[:, None]) ** 8)
    return GridField(grid, f.parity, scipy.fft.irfft(fhat, n=grid.m_lon, axis=1))


def advance_step(
    state: ModelState,
    config: SislConfig,
    consts: PhysicalConstants,
    h_s: GridField,
) -> ModelState:
    """One full SISL step; returns the state at t + dt."""
    grid = state.grid
    M, N = config.truncation(grid)

    for name, f in (("h", state.h), ("u", state.u), ("v", state.v)):
        if not np.all(np.isfinite(f.values)):
            raise NumericalAbort(f"non-finite {name} field at t={state.time:.1f} s")

    dep = compute_departure_points(state, config, consts)
    pts = np.column_stack([dep.theta, dep.phi])

    if config.advect_only:
        if config.interp_method == "dfs":
            vals = dfs_interp_many(
                [state.h], pts, M, N, config.M0, config.nufft_eps, consts
            )
        else:
            degree = 3 if config.interp_method == "lag3" else 5
            vals = lagrange_interp_many([state.h], pts, degree)
        h_new = GridField(grid, FieldParity.SCALAR, vals[0].reshape(grid.shape))
        taper = config.filter_taper * min(1.0, config.dt / 100.0)
        h_new = _filter_field(h_new, M, N, config.M0, taper)
        if not np.all(np.isfinite(h_new.values)):
            raise NumericalAbort(f"non-finite height field at t={state.time + config.dt}")
        return ModelState(
            time=state.time + config.dt,
            h=h_new,
            u=state.u,
            v=state.v,
            h_prev=state.h,
            u_prev=state.u,
            v_prev=state.v,
            div_prev=state.div_prev,
        )

    r_vu, r_vv, r_h, info = assemble_rv_rh(state, dep, config, consts, h_s)
    h_new, u_new, v_new, div_new = semi_implicit_solve(
        r_vu, r_vv, r_h, config, consts, info["h_bar"]
    )

    # zonal ring mask of the prognostic values (orthogonal projection per
    # ring; representation handling is left to the consumers of the state)
    taper = config.filter_taper * min(1.0, config.dt / 100.0)
    h_new = _filter_field(h_new, M, N, config.M0, taper)
    u_new = _filter_field(u_new, M, N, config.M0, taper)
    v_new = _filter_field(v_new, M, N, config.M0, taper)
    div_new = _filter_field(div_new, M, N, config.M0, taper)

    for name, f in (("h", h_new), ("u", u_new), ("v", v_new)):
        if not np.all(np.isfinite(f.values)):
            raise NumericalAbort(
                f"non-finite {name} field at t={state.time + config.dt:.1f} s"
            )

    return ModelState(
        time=state.time + config.dt,
        h=h_new,
        u=u_new,
        v=v_new,
        h_prev=state.h,
        u_prev=state.u,
        v_prev=state.v,
        div_prev=info["delta0"],
        div_now=div_new,
    )


def initial_state(h: GridField, u: GridField, v: GridField, time: float = 0.0) -> ModelState:
    """Cold-start state: previous level is a copy of the current one."""
    return ModelState(time, h, u, v, h_prev=h, u_prev=u, v_prev=v, div_prev=None)
