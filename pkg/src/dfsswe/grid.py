"""Tensor-product latitude-longitude grids on the sphere.

Four node families are supported, parameterized by an even integer ``J``:

* ``GRID_M1``  -- colatitudes ``j*pi/J``, ``j = 1..J-1`` (poles excluded),
* ``GRID_0``   -- colatitudes ``(j+1/2)*pi/J``, ``j = 0..J-1`` (half-offset),
* ``GRID_1``   -- colatitudes ``j*pi/J``, ``j = 0..J`` (poles included),
* ``GAUSS_LEGENDRE`` -- ``arccos`` of the degree-J Legendre roots.

Every grid uses ``M_lon = 2J`` equispaced longitudes.  Each grid carries
per-node surface quadrature weights (steradians) that integrate the
trigonometric interpolant in colatitude exactly, so sphere integrals of
band-limited fields are exact up to roundoff.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np


class GridKind(enum.Enum):
    GRID_M1 = "m1"
    GRID_0 = "0"
    GRID_1 = "1"
    GAUSS_LEGENDRE = "gl"


@dataclass(frozen=True)
class Grid:
    """Immutable node set.  ``quad_weights`` are per-latitude steradian weights
    for one longitude column; the full surface rule is their tensor product
    with the uniform longitude rule (already folded in, see ``build_grid``)."""

    kind: GridKind
    J: int
    colatitudes: np.ndarray  # (N_lat,), strictly increasing in (0, pi) or [0, pi]
    longitudes: np.ndarray  # (M_lon,), equispaced in [0, 2*pi)
    quad_weights: np.ndarray  # (N_lat,), sum * M_lon == 4*pi

    def __post_init__(self):
        self.colatitudes.setflags(write=False)
        self.longitudes.setflags(write=False)
        self.quad_weights.setflags(write=False)

    @property
    def n_lat(self) -> int:
        return self.colatitudes.size

    @property
    def m_lon(self) -> int:
        return self.longitudes.size

    @property
    def shape(self) -> tuple[int, int]:
        return (self.n_lat, self.m_lon)

    @property
    def cache_key(self) -> tuple:
        return (self.kind, self.J)

    def area_weights(self) -> np.ndarray:
        """(N_lat, M_lon) steradian weight per node."""
        return np.broadcast_to(self.quad_weights[:, None], self.shape)

    def has_pole_rows(self) -> bool:
        return self.kind is GridKind.GRID_1


def legendre_nodes(J: int) -> tuple[np.ndarray, np.ndarray]:
    """Nodes and weights of the J-point Gauss-Legendre rule on [-1, 1].

    Newton iteration on the degree-J Legendre polynomial; converged when
    ``|P_J(z)| <= 1e-14`` at every node.
    """
    if J < 1:
        raise ValueError("J must be >= 1")
    if J == 1:
        return np.array([0.0]), np.array([2.0])

    # Extended precision keeps the terminal residual below the 1e-14 gate
    # even near the endpoints, where |P_J'| grows like J^2.
    k = np.arange(J, dtype=np.longdouble)
    z = np.cos(np.pi * (4 * k + 3) / (4 * J + 2))

    def p_and_dp(z):
        p_prev = np.ones_like(z)
        p = z.copy()
        for n in range(2, J + 1):
            p_prev, p = p, ((2 * n - 1) * z * p - (n - 1) * p_prev) / n
        dp = J * (z * p - p_prev) / (z**2 - 1.0)
        return p, dp

    converged = False
    for _ in range(100):
        p, dp = p_and_dp(z)
        dz = p / dp
        z = z - dz
        if np.max(np.abs(dz)) <= 10 * np.finfo(np.longdouble).eps:
            converged = True
            break
    p, dp = p_and_dp(z)
    if not converged or np.max(np.abs(p)) > 1e-14:
        raise RuntimeError("Gauss-Legendre Newton iteration failed to converge")

    w = 2.0 / ((1.0 - z**2) * dp**2)
    order = np.argsort(z)
    return z[order].astype(float), w[order].astype(float)


def _theta_weights_exact(theta: np.ndarray, n_max: int) -> np.ndarray:
    """Weights w_j with sum_j w_j cos(n theta_j) = int_0^pi cos(n t) sin(t) dt
    for n = 0..n_max.  Requires len(theta) == n_max + 1."""
    n = np.arange(n_max + 1)
    # int_0^pi cos(n t) sin(t) dt = (1 + cos(n pi)) / (1 - n^2) for n != 1, 0 for n = 1
    gamma = np.zeros(n_max + 1)
    even = n % 2 == 0
    gamma[even] = 2.0 / (1.0 - n[even].astype(float) ** 2)
    V = np.cos(np.outer(n, theta))  # (n_max+1, N)
    return np.linalg.solve(V, gamma)


@lru_cache(maxsize=64)
def build_grid(kind: GridKind, J: int) -> Grid:
    """Construct a grid with ``M_lon = 2J`` longitudes.  ``J`` must be even and >= 4.

    Grids are immutable, so construction is memoized; identical inputs
    return the identical object."""
    if J < 4 or J % 2 != 0:
        raise ValueError(f"J must be even and >= 4, got {J}")

    m_lon = 2 * J
    lon = np.arange(m_lon) * (2.0 * np.pi / m_lon)

    if kind is GridKind.GRID_M1:
        theta = np.arange(1, J) * (np.pi / J)
        w = _theta_weights_exact(theta, J - 2)
    elif kind is GridKind.GRID_0:
        theta = (np.arange(J) + 0.5) * (np.pi / J)
        w = _theta_weights_exact(theta, J - 1)
    elif kind is GridKind.GRID_1:
        theta = np.arange(J + 1) * (np.pi / J)
        # Pole rows get zero weight (vanishing Jacobian); interior rows carry
        # the exact-in-cos(theta) rule of the pole-free node set.
        w = np.zeros(J + 1)
        w[1:-1] = _theta_weights_exact(theta[1:-1], J - 2)
    elif kind is GridKind.GAUSS_LEGENDRE:
        z, wz = legendre_nodes(J)
        theta = np.arccos(z[::-1])  # increasing colatitude
        w = wz[::-1].copy()
    else:
        raise ValueError(f"unknown grid kind {kind!r}")

    # Fold the uniform longitude rule into per-node steradian weights.
    quad = w * (2.0 * np.pi / m_lon)
    return Grid(kind=kind, J=J, colatitudes=theta, longitudes=lon, quad_weights=quad)


def max_truncation_n(grid: Grid) -> int:
    """Largest colatitude wavenumber N analyzable on this grid."""
    if grid.kind is GridKind.GRID_M1:
        return grid.J - 2
    return grid.J - 1
