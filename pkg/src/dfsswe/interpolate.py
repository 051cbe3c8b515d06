"""Off-grid evaluation of gridded fields.

Two interpolants with the same call surface:

* ``lagrange_interp`` -- tensor-product Lagrange interpolation of degree 3
  or 5.  Longitude stencils wrap periodically; latitude stencils that run
  past a pole continue onto the antipodal-meridian rows (phi + pi) with a
  sign flip for vector components, which is the exact continuation of the
  doubled-sphere representation.
* ``dfs_interp`` / ``dfs_interp_vector`` -- spectrally accurate evaluation:
  project the samples onto the pole-regular double-Fourier basis, re-expand
  as a complex bivariate series and evaluate it at the targets with the
  type-II NUFFT.
"""

from __future__ import annotations

import math
from functools import lru_cache

import numpy as np

from .constants import PhysicalConstants
from .fields import FieldParity, GridField
from .grid import Grid, GridKind
from .nufft import NufftPlan, nufft2_type2
from .transforms import analyze_std, pr_to_std, project_pr, std_to_complex, zonal_filter

try:
    import numba

    _HAVE_NUMBA = True
except ImportError:  # pragma: no cover
    _HAVE_NUMBA = False

_PAD = 8  # virtual rows added beyond each pole


def normalize_sphere_points(theta: np.ndarray, phi: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Fold arbitrary (theta, phi) into theta in [0, pi], phi in [0, 2 pi)."""
    theta = np.asarray(theta, dtype=float).copy()
    phi = np.asarray(phi, dtype=float).copy()
    theta = np.mod(theta, 2.0 * np.pi)
    over = theta > np.pi
    theta[over] = 2.0 * np.pi - theta[over]
    phi[over] += np.pi
    return theta, np.mod(phi, 2.0 * np.pi)


@lru_cache(maxsize=32)
def _extended_rows(kind: GridKind, J: int) -> tuple[np.ndarray, np.ndarray, np.ndarray, int]:
    """Virtual latitude rows continuing the grid across both poles.

    Returns (theta, source_row, flip, offset) where index ``e + offset``
    addresses extension row ``e`` for ``e`` in [-_PAD, n_lat-1+_PAD]; ``flip``
    marks rows read at phi + pi (negated for vector components).
    """
    from .grid import build_grid

    grid = build_grid(kind, J)
    th = grid.colatitudes
    R = th.size
    pad = _PAD
    E = R + 2 * pad
    theta = np.empty(E)
    row = np.empty(E, dtype=np.int64)
    flip = np.zeros(E, dtype=bool)
    pole_rows = kind is GridKind.GRID_1

    for e in range(-pad, R + pad):
        i = e + pad
        if 0 <= e < R:
            theta[i], row[i], flip[i] = th[e], e, False
        elif e < 0:
            src = -e if pole_rows else -1 - e
            theta[i], row[i], flip[i] = -th[src], src, True
        else:
            src = (2 * R - 2 - e) if pole_rows else (2 * R - 1 - e)
            theta[i], row[i], flip[i] = 2.0 * np.pi - th[src], src, True
    return theta, row, flip, pad


def lagrange_interp(
    field: GridField, points: np.ndarray, degree: int = 5
) -> np.ndarray:
    """Tensor-product Lagrange interpolation at (theta, phi) points (K, 2)."""
    vals = lagrange_interp_many([field], np.asarray(points), degree)
    return vals[0]


def lagrange_interp_many(
    fields: list[GridField], points: np.ndarray, degree: int = 5
) -> np.ndarray:
    """Interpolate several fields on one grid at shared points -> (B, K)."""
    if degree not in (3, 5):
        raise ValueError("degree must be 3 or 5")
    grid = fields[0].grid
    for f in fields:
        if f.grid is not grid and f.grid.cache_key != grid.cache_key:
            raise ValueError("fields must share one grid")
    points = np.asarray(points, dtype=float)
    if points.size == 0:
        return np.zeros((len(fields), 0))
    theta, phi = normalize_sphere_points(points[:, 0], points[:, 1])

    ext_theta, ext_row, ext_flip, off = _extended_rows(grid.kind, grid.J)
    V = np.ascontiguousarray(np.stack([f.values for f in fields]))
    flip_sign = np.array(
        [-1.0 if f.parity is FieldParity.VECTOR else 1.0 for f in fields]
    )
    out = np.empty((len(fields), theta.size))
    if _HAVE_NUMBA:
        _lagrange_kernel(
            V, theta, phi, ext_theta, ext_row, ext_flip.astype(np.int8),
            degree, flip_sign, out,
        )
        return out

    # numpy fallback
    d = degree
    base = np.searchsorted(ext_theta, theta) - 1  # index into the extended rows
    e0 = base - (d - 1) // 2
    m_lon = grid.m_lon
    hphi = 2.0 * np.pi / m_lon
    s = phi / hphi
    c0 = np.floor(s).astype(np.int64) - (d - 1) // 2
    wt = _lagrange_weights(theta[:, None] - ext_theta[e0[:, None] + np.arange(d + 1)])
    wp = _lagrange_weights(s[:, None] - (c0[:, None] + np.arange(d + 1)))
    out[:] = 0.0
    for i in range(d + 1):
        e = e0 + i
        rows = ext_row[e]
        fl = ext_flip[e]
        shift = np.where(fl, m_lon // 2, 0)
        for j in range(d + 1):
            cols = (c0 + j + shift) % m_lon
            gathered = V[:, rows, cols]
            sign = np.where(fl, flip_sign[:, None], 1.0)
            out += gathered * sign * (wt[:, i] * wp[:, j])[None, :]
    return out


def _lagrange_weights(diffs: np.ndarray) -> np.ndarray:
    """Barycentric-free Lagrange weights from target-node differences (K, p)."""
    K, p = diffs.shape
    w = np.ones((K, p))
    for i in range(p):
        for j in range(p):
            if i == j:
                continue
            w[:, i] *= diffs[:, j] / (diffs[:, j] - diffs[:, i])
    return w


if _HAVE_NUMBA:

    @numba.njit(parallel=True, cache=True)
    def _lagrange_kernel(
        V, theta, phi, ext_theta, ext_row, ext_flip, degree, flip_sign, out
    ):  # pragma: no cover - jitted
        B = V.shape[0]
        m_lon = V.shape[2]
        K = theta.size
        p = degree + 1
        half = m_lon // 2
        hphi = 2.0 * np.pi / m_lon
        for k in numba.prange(K):
            t = theta[k]
            base = np.searchsorted(ext_theta, t) - 1
            e0 = base - (degree - 1) // 2
            s = phi[k] / hphi
            c0 = int(math.floor(s)) - (degree - 1) // 2

            wt = np.ones(p)
            wp = np.ones(p)
            for i in range(p):
                for j in range(p):
                    if i == j:
                        continue
                    xi = ext_theta[e0 + i]
                    xj = ext_theta[e0 + j]
                    wt[i] *= (t - xj) / (xi - xj)
                    wp[i] *= (s - (c0 + j)) / (i - j)
            for b in range(B):
                acc = 0.0
                for i in range(p):
                    row = ext_row[e0 + i]
                    flipped = ext_flip[e0 + i] != 0
                    shift = half if flipped else 0
                    sgn = flip_sign[b] if flipped else 1.0
                    racc = 0.0
                    for j in range(p):
                        col = (c0 + j + shift) % m_lon
                        racc += V[b, row, col] * wp[j]
                    acc += racc * sgn * wt[i]
                out[b, k] = acc


# ---------------------------------------------------------------------------
# spectral interpolation


@lru_cache(maxsize=16)
def _nufft_plan(N: int, M: int, eps: float) -> NufftPlan:
    return NufftPlan(N, M, eps=eps)


def dfs_complex_coeffs(field: GridField, M: int, N: int, filter_M0: int | None = None):
    """Pole-regular projection of a scalar grid field, re-expanded as a
    complex bivariate Fourier series ready for NUFFT evaluation."""
    pr = project_pr(analyze_std(field, M, N, filter_M0))
    return std_to_complex(pr_to_std(pr))


def dfs_vector_complex_coeffs(
    u: GridField,
    v: GridField,
    M: int,
    N: int,
    consts: PhysicalConstants,
    filter_M0: int | None = None,
):
    """Complex series of both wind components via the Helmholtz-potential
    representation (potentials in the pole-regular scalar basis).  The
    reconstructed components are exact gradients of pole-regular scalars,
    the correct continuity class for transported wind-like quantities."""
    from .operators import potentials_from_wind, velocity_series_from_potentials

    chi, psi = potentials_from_wind(u, v, consts, M, N, filter_M0)
    cu, cv = velocity_series_from_potentials(chi, psi, consts)
    return std_to_complex(cu), std_to_complex(cv)


def dfs_interp(
    field: GridField,
    points: np.ndarray,
    M: int,
    N: int,
    filter_M0: int | None = None,
    eps: float = 1e-12,
) -> np.ndarray:
    """Spectral interpolation of a scalar field at (theta, phi) points (K, 2)."""
    return dfs_interp_many([field], points, M, N, filter_M0, eps)[0]


def dfs_interp_vector(
    u: GridField,
    v: GridField,
    points: np.ndarray,
    M: int,
    N: int,
    filter_M0: int | None = None,
    eps: float = 1e-12,
    consts: PhysicalConstants | None = None,
) -> tuple[np.ndarray, np.ndarray]:
    """Spectral interpolation of wind components via their potentials."""
    if u.parity is not FieldParity.VECTOR or v.parity is not FieldParity.VECTOR:
        raise ValueError("dfs_interp_vector expects vector-parity fields")
    vals = dfs_interp_many([(u, v)], points, M, N, filter_M0, eps, consts)
    return vals[0], vals[1]


def dfs_interp_many(
    items: list,
    points: np.ndarray,
    M: int,
    N: int,
    filter_M0: int | None = None,
    eps: float = 1e-12,
    consts: PhysicalConstants | None = None,
) -> np.ndarray:
    """Batch spectral interpolation at shared points -> (B, K).

    ``items`` may mix scalar ``GridField`` entries and ``(u, v)`` wind pairs;
    the returned rows follow the flattened component order.
    """
    from .constants import EARTH

    if consts is None:
        consts = EARTH
    points = np.asarray(points, dtype=float)
    coeff_arrays = []
    for item in items:
        if isinstance(item, tuple):
            cu, cv = dfs_vector_complex_coeffs(
                item[0], item[1], M, N, consts, filter_M0
            )
            coeff_arrays.extend([cu.F, cv.F])
        else:
            coeff_arrays.append(dfs_complex_coeffs(item, M, N, filter_M0).F)
    if points.size == 0:
        return np.zeros((len(coeff_arrays), 0))
    theta, phi = points[:, 0], points[:, 1]
    plan = _nufft_plan(N, M, eps)
    return nufft2_type2(plan, np.stack(coeff_arrays), theta, phi, real=True)
