"""Initial conditions and reference solutions for the standard rotating
shallow-water test battery (Williamson et al. 1992 cases 1, 2, 5, 6 and the
Galewsky et al. 2004 barotropic jet).

Parameter values are transcribed from those references:

* TC1/TC2: solid-body flow tilted by ``alpha = pi/2 - 0.05`` from the polar
  axis, ``u0 = 2 pi a / 12 days``; TC1 advects a 1000 m cosine bell of
  radius a/3 centered at (270E, 0N); TC2 uses ``g h0 = 2.94e4 m^2/s^2``.
* TC5: zonal flow ``u0 = 20 m/s``, ``h0 = 5960 m``, conical mountain of
  height 2000 m and radius pi/9 at (90W, 30N).
* TC6: wavenumber-4 Rossby-Haurwitz wave, ``omega = K = 7.848e-6 1/s``,
  ``h0 = 8000 m``.
* Galewsky: zonal jet ``u_max = 80 m/s`` between latitudes pi/7 and
  5 pi/14, balanced height with a 10 km global-mean depth, optional 120 m
  Gaussian bump perturbation.

Heights are free-surface heights (the fluid depth is ``h - h_s``); winds are
(eastward, northward).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .constants import PhysicalConstants
from .fields import FieldParity, GridField
from .grid import Grid, legendre_nodes
from .stepper import ModelState, initial_state

DAY = 86400.0
TILT = np.pi / 2 - 0.05


@dataclass(frozen=True)
class TestCase:
    tag: str  # 'tc1' | 'tc2' | 'tc5' | 'tc6' | 'galewsky'
    alpha: float = 0.0  # flow-axis tilt from the polar axis
    perturbed: bool = True  # Galewsky only

    @property
    def rotation_axis(self) -> tuple[float, float, float]:
        return (-np.sin(self.alpha), 0.0, np.cos(self.alpha))

    @property
    def advect_only(self) -> bool:
        return self.tag == "tc1"

    @property
    def has_exact_solution(self) -> bool:
        return self.tag in ("tc1", "tc2")


def make_case(tag: str, perturbed: bool = True) -> TestCase:
    tag = tag.lower()
    if tag in ("tc1", "tc2"):
        return TestCase(tag, alpha=TILT)
    if tag in ("tc5", "tc6", "galewsky"):
        return TestCase(tag, alpha=0.0, perturbed=perturbed)
    raise ValueError(f"unknown test case {tag!r}")


def _latlon(grid: Grid) -> tuple[np.ndarray, np.ndarray]:
    th, ph = np.meshgrid(grid.colatitudes, grid.longitudes, indexing="ij")
    return np.pi / 2 - th, ph  # latitude, longitude


def _tilted_solid_body(lat, lon, u0, alpha):
    u = u0 * (np.cos(lat) * np.cos(alpha) + np.cos(lon) * np.sin(lat) * np.sin(alpha))
    v = -u0 * np.sin(lon) * np.sin(alpha)
    return u, v


def _bell(lat, lon, consts, center_lon, center_lat, h0=1000.0):
    radius = consts.a / 3.0
    cosd = np.sin(center_lat) * np.sin(lat) + np.cos(center_lat) * np.cos(lat) * np.cos(
        lon - center_lon
    )
    r = consts.a * np.arccos(np.clip(cosd, -1.0, 1.0))
    return np.where(r < radius, 0.5 * h0 * (1.0 + np.cos(np.pi * r / radius)), 0.0)


def _geostrophic_height(lat, lon, consts, u0, gh0, alpha):
    mu = -np.cos(lon) * np.cos(lat) * np.sin(alpha) + np.sin(lat) * np.cos(alpha)
    return (gh0 - (consts.a * consts.Omega * u0 + 0.5 * u0**2) * mu**2) / consts.g


def _tc5_mountain(lat, lon, consts):
    hs0, radius = 2000.0, np.pi / 9.0
    clon, clat = 3.0 * np.pi / 2.0, np.pi / 6.0  # 90W, 30N
    dlon = np.mod(lon - clon + np.pi, 2.0 * np.pi) - np.pi
    r = np.sqrt(np.minimum(radius**2, dlon**2 + (lat - clat) ** 2))
    return hs0 * (1.0 - r / radius)


def _rossby_haurwitz(lat, lon, consts):
    omega = K = 7.848e-6
    R = 4
    h0 = 8000.0
    a, Om, g = consts.a, consts.Omega, consts.g
    c = np.cos(lat)
    u = a * omega * c + a * K * c ** (R - 1) * (R * np.sin(lat) ** 2 - c**2) * np.cos(R * lon)
    v = -a * K * R * c ** (R - 1) * np.sin(lat) * np.sin(R * lon)
    A = 0.5 * omega * (2 * Om + omega) * c**2 + 0.25 * K**2 * (
        (R + 1) * c ** (2 * R + 2)
        + (2 * R**2 - R - 2) * c ** (2 * R)
        - 2 * R**2 * c ** (2 * R - 2)
    )
    B = (
        2.0
        * (Om + omega)
        * K
        / ((R + 1) * (R + 2))
        * c**R
        * ((R**2 + 2 * R + 2) - (R + 1) ** 2 * c**2)
    )
    C = 0.25 * K**2 * c ** (2 * R) * ((R + 1) * c**2 - (R + 2))
    h = h0 + (a**2 * A + a**2 * B * np.cos(R * lon) + a**2 * C * np.cos(2 * R * lon)) / g
    return h, u, v


# ---------------------------------------------------------------------------
# Galewsky jet


def galewsky_jet_u(lat: np.ndarray) -> np.ndarray:
    """Zonal jet profile (C-infinity bump between lat0 and lat1)."""
    umax = 80.0
    lat0 = np.pi / 7.0
    lat1 = np.pi / 2.0 - lat0
    en = np.exp(-4.0 / (lat1 - lat0) ** 2)
    out = np.zeros_like(lat)
    inside = (lat > lat0) & (lat < lat1)
    x = lat[inside]
    out[inside] = (umax / en) * np.exp(1.0 / ((x - lat0) * (x - lat1)))
    return out


def _galewsky_height_profile(lats: np.ndarray, consts: PhysicalConstants) -> np.ndarray:
    """gh integral of the gradient-wind balance, cumulative from the south
    pole to each requested latitude (composite 12-point Gauss panels)."""
    a, Om = consts.a, consts.Omega

    def integrand(x):
        u = galewsky_jet_u(x)
        return a * u * (2.0 * Om * np.sin(x) + np.tan(x) * u / a)

    order = np.argsort(lats)
    sorted_lats = lats[order]
    # panel boundaries: requested latitudes plus a fine background partition
    bounds = np.unique(
        np.concatenate([[-np.pi / 2], sorted_lats, np.linspace(-np.pi / 2, np.pi / 2, 2049)])
    )
    zq, wq = legendre_nodes(12)
    mid = 0.5 * (bounds[1:] + bounds[:-1])
    half = 0.5 * (bounds[1:] - bounds[:-1])
    panels = (integrand(mid[:, None] + half[:, None] * zq[None, :]) * wq).sum(axis=1) * half
    cumulative = np.concatenate([[0.0], np.cumsum(panels)])
    at_lat = np.interp(sorted_lats, bounds, cumulative)
    out = np.empty_like(lats)
    out[order] = at_lat
    return -out  # gh(lat) = const - integral


def _galewsky_fields(grid: Grid, consts: PhysicalConstants, perturbed: bool):
    lat, lon = _latlon(grid)
    u = galewsky_jet_u(lat)
    v = np.zeros_like(u)
    gh_profile = _galewsky_height_profile(np.pi / 2 - grid.colatitudes, consts)
    h = gh_profile[:, None] / consts.g * np.ones_like(lon)
    # fix the constant so the global mean depth is 10 km
    w = grid.area_weights()
    h = h + (10000.0 - (w * h).sum() / w.sum())
    if perturbed:
        hhat, alpha_g, beta_g, lat2 = 120.0, 1.0 / 3.0, 1.0 / 15.0, np.pi / 4.0
        lon_c = np.mod(lon + np.pi, 2.0 * np.pi) - np.pi  # (-pi, pi]
        h = h + hhat * np.cos(lat) * np.exp(-((lon_c / alpha_g) ** 2)) * np.exp(
            -(((lat2 - lat) / beta_g) ** 2)
        )
    return h, u, v


# ---------------------------------------------------------------------------
# public surface


def init_state(
    case: TestCase, grid: Grid, consts: PhysicalConstants
) -> tuple[ModelState, GridField]:
    """Initial model state and bathymetry for a test case."""
    lat, lon = _latlon(grid)
    hs = np.zeros(grid.shape)

    if case.tag == "tc1":
        u0 = 2.0 * np.pi * consts.a / (12.0 * DAY)
        u, v = _tilted_solid_body(lat, lon, u0, case.alpha)
        h = _bell(lat, lon, consts, center_lon=3.0 * np.pi / 2.0, center_lat=0.0)
    elif case.tag == "tc2":
        u0 = 2.0 * np.pi * consts.a / (12.0 * DAY)
        u, v = _tilted_solid_body(lat, lon, u0, case.alpha)
        h = _geostrophic_height(lat, lon, consts, u0, 2.94e4, case.alpha)
    elif case.tag == "tc5":
        u0 = 20.0
        u, v = _tilted_solid_body(lat, lon, u0, 0.0)
        h = _geostrophic_height(lat, lon, consts, u0, 5960.0 * consts.g, 0.0)
        hs = _tc5_mountain(lat, lon, consts)
    elif case.tag == "tc6":
        h, u, v = _rossby_haurwitz(lat, lon, consts)
    elif case.tag == "galewsky":
        h, u, v = _galewsky_fields(grid, consts, case.perturbed)
    else:
        raise ValueError(f"unknown test case {case.tag!r}")

    state = initial_state(
        GridField(grid, FieldParity.SCALAR, h),
        GridField(grid, FieldParity.VECTOR, u),
        GridField(grid, FieldParity.VECTOR, v),
    )
    return state, GridField(grid, FieldParity.SCALAR, hs)


def _rotate_about_axis(points: np.ndarray, axis: np.ndarray, angle: float) -> np.ndarray:
    """Rodrigues rotation of unit vectors (K, 3)."""
    k = axis / np.linalg.norm(axis)
    cross = np.cross(np.broadcast_to(k, points.shape), points)
    dot = points @ k
    return (
        points * np.cos(angle)
        + cross * np.sin(angle)
        + np.outer(dot, k) * (1.0 - np.cos(angle))
    )


def exact_solution(
    case: TestCase, t: float, grid: Grid, consts: PhysicalConstants
) -> GridField:
    """Exact height field where one exists (TC1: rigidly rotated bell;
    TC2: the steady initial field)."""
    if not case.has_exact_solution:
        raise ValueError(f"test case {case.tag!r} has no exact solution")
    lat, lon = _latlon(grid)
    if case.tag == "tc2":
        u0 = 2.0 * np.pi * consts.a / (12.0 * DAY)
        h = _geostrophic_height(lat, lon, consts, u0, 2.94e4, case.alpha)
        return GridField(grid, FieldParity.SCALAR, h)

    # TC1: pull grid points back by the accumulated rotation, evaluate the bell
    omega_flow = 2.0 * np.pi / (12.0 * DAY)
    th = np.pi / 2 - lat
    st, ct = np.sin(th), np.cos(th)
    r = np.column_stack([(st * np.cos(lon)).ravel(), (st * np.sin(lon)).ravel(), ct.ravel()])
    axis = np.asarray(case.rotation_axis)
    back = _rotate_about_axis(r, axis, -omega_flow * t)
    lat_b = np.pi / 2 - np.arccos(np.clip(back[:, 2], -1.0, 1.0))
    lon_b = np.mod(np.arctan2(back[:, 1], back[:, 0]), 2.0 * np.pi)
    h = _bell(
        lat_b.reshape(grid.shape),
        lon_b.reshape(grid.shape),
        consts,
        center_lon=3.0 * np.pi / 2.0,
        center_lat=0.0,
    )
    return GridField(grid, FieldParity.SCALAR, h)
