"""Error norms, global invariants, and the kinetic-energy spectrum.

Mass and total energy use the standard shallow-water functionals

    mass   = integral (h - h_s) dA
    energy = integral [ (h - h_s)(u^2 + v^2)/2 + g (h^2 - h_s^2)/2 ] dA

evaluated with the grid's quadrature weights, so both interpolation variants
are measured with identical functionals.

The spectrum diagnostic expands vorticity and divergence in spherical
harmonics by direct associated-Legendre quadrature on a Gauss-Legendre grid
(an O(J^3) one-off, diagnostics only) and bins

    E(n) = a^2 / (4 n (n+1)) * sum_m (|zeta_nm|^2 + |delta_nm|^2),

normalized so that sum_n E(n) equals the global-mean kinetic-energy density
in m^2/s^2.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np
import scipy.fft

from .constants import PhysicalConstants
from .fields import GridField
from .grid import Grid, GridKind, build_grid
from .operators import div_and_vort
from .stepper import ModelState
from .transforms import StdCoeffs, pr_to_std, std_basis_kind


def error_norms(f: GridField, ref: GridField) -> tuple[float, float, float]:
    """Relative (l1, l2, linf) norms of f - ref; absolute norms when the
    reference vanishes."""
    if f.values.shape != ref.values.shape:
        raise ValueError("fields must share one grid")
    w = f.grid.area_weights()
    diff = f.values - ref.values
    l1 = (w * np.abs(diff)).sum()
    l2 = np.sqrt((w * diff**2).sum())
    linf = np.abs(diff).max()
    l2_den = np.sqrt((w * ref.values**2).sum())
    if l2_den == 0.0:
        return float(l1), float(l2), float(linf)
    l1_den = (w * np.abs(ref.values)).sum()
    linf_den = np.abs(ref.values).max()
    return float(l1 / l1_den), float(l2 / l2_den), float(linf / linf_den)


def mass(state: ModelState, h_s: GridField, consts: PhysicalConstants) -> float:
    """integral (h - h_s) dA, in m^3."""
    grid = state.grid
    w = grid.area_weights() * consts.a**2
    return float((w * (state.h.values - h_s.values)).sum())


def energy(state: ModelState, h_s: GridField, consts: PhysicalConstants) -> float:
    """Total shallow-water energy: depth-weighted kinetic plus potential."""
    grid = state.grid
    w = grid.area_weights() * consts.a**2
    depth = state.h.values - h_s.values
    ke = 0.5 * depth * (state.u.values**2 + state.v.values**2)
    pe = 0.5 * consts.g * (state.h.values**2 - h_s.values**2)
    return float((w * (ke + pe)).sum())


# ---------------------------------------------------------------------------
# spherical-harmonic analysis on the Gauss-Legendre grid


@lru_cache(maxsize=8)
def _legendre_tables(J: int, l_max: int) -> tuple[np.ndarray, np.ndarray]:
    """Orthonormal associated Legendre functions P[l, m, j] on the degree-J
    Gauss-Legendre nodes (int P^2 dz = 1), plus the quadrature weights."""
    grid = build_grid(GridKind.GAUSS_LEGENDRE, J)
    z = np.cos(grid.colatitudes)
    w = grid.quad_weights * grid.m_lon / (2.0 * np.pi)  # back to int dz weights
    P = np.zeros((l_max + 1, l_max + 1, z.size))
    P[0, 0] = 1.0 / np.sqrt(2.0)
    s = np.sqrt(1.0 - z * z)
    for m in range(1, l_max + 1):
        P[m, m] = -np.sqrt((2 * m + 1) / (2.0 * m)) * s * P[m - 1, m - 1]
    for m in range(l_max + 1):
        if m + 1 <= l_max:
            P[m + 1, m] = np.sqrt(2 * m + 3.0) * z * P[m, m]
        for l in range(m + 2, l_max + 1):
            a_lm = np.sqrt((4.0 * l * l - 1.0) / (l * l - m * m))
            b_lm = np.sqrt(
                (2.0 * l + 1.0)
                / (2.0 * l - 3.0)
                * ((l - 1.0) ** 2 - m * m)
                / (l * l - m * m)
            )
            P[l, m] = a_lm * z * P[l - 1, m] - b_lm * P[l - 2, m]
    return P, w


def _sh_analyze(values: np.ndarray, tables, l_max: int) -> np.ndarray:
    """Coefficients c[l, m] (m >= 0) of f = sum c_lm P_lm(z) e^{i m phi} with
    int P^2 dz = 1; the phi factor carries no normalization."""
    P, w = tables
    m_lon = values.shape[1]
    F = scipy.fft.fft(values, axis=1) / m_lon  # F[:, m] multiplies e^{i m phi}
    c = np.zeros((l_max + 1, l_max + 1), dtype=complex)
    for m in range(l_max + 1):
        c[m:, m] = (P[m:, m] * (w * F[:, m])).sum(axis=1)
    return c


def _field_on_gl(std: StdCoeffs, gl: Grid) -> np.ndarray:
    """Evaluate a std series on the Gauss-Legendre grid."""
    from .transforms import synthesize_std

    return synthesize_std(std, gl).values


def ke_spectrum(
    state: ModelState, consts: PhysicalConstants, n_max: int | None = None
) -> tuple[np.ndarray, np.ndarray]:
    """Kinetic-energy spectrum E(n), n = 1..n_max, from the spherical-harmonic
    expansions of vorticity and divergence."""
    grid = state.grid
    if n_max is None:
        n_max = grid.J // 2
    if n_max > grid.J // 2:
        raise ValueError("n_max exceeds the resolvable range J/2")

    delta, zeta = div_and_vort(state.u, state.v, consts)
    gl = build_grid(GridKind.GAUSS_LEGENDRE, grid.J)
    dvals = _field_on_gl(pr_to_std(delta), gl)
    zvals = _field_on_gl(pr_to_std(zeta), gl)

    tables = _legendre_tables(grid.J, n_max)
    cd = _sh_analyze(dvals, tables, n_max)
    cz = _sh_analyze(zvals, tables, n_max)

    n = np.arange(1, n_max + 1)
    energy_n = np.zeros(n_max)
    for i, l in enumerate(n):
        # |c_l0|^2 + 2 sum_{m>0} |c_lm|^2 accounts for the negative-m modes
        pow_d = np.abs(cd[l, 0]) ** 2 + 2.0 * (np.abs(cd[l, 1 : l + 1]) ** 2).sum()
        pow_z = np.abs(cz[l, 0]) ** 2 + 2.0 * (np.abs(cz[l, 1 : l + 1]) ** 2).sum()
        energy_n[i] = consts.a**2 / (4.0 * l * (l + 1)) * (pow_d + pow_z)
    return n, energy_n
