"""Horizontal differential operators and elliptic solves in coefficient space.

Every operator works per zonal wavenumber m on the colatitude series of the
field.  Multiplications by sin/cos couple neighboring harmonics (banded);
the 1/sin(theta) factors of spherical calculus are inverted exactly through
the stable recurrences in :mod:`dfsswe.series`, never by dividing grid
values, so pole rows are always finite.

The Helmholtz and Poisson problems are multiplied through by
``a^2 sin^2(theta)`` to clear the polar singularity and solved per m as
banded systems (bandwidth 2 in harmonic index) in the plain cos/sin basis;
the Poisson nullspace is fixed by zeroing the constant mode.  The implicit
solver consumes the same banded operator family on both sides, which keeps
the gravity-wave update neutral up to the band edge.

Vector fields are represented through their Helmholtz potentials: the
components reconstructed from pole-regular potentials span exactly the
gradients of pole-regular scalars, the correct continuity class at the
poles (a per-component expansion misses it for zonal wavenumbers >= 2).

Wind convention: ``u`` eastward, ``v`` northward, ``theta`` colatitude.
``gradient`` returns the literal spherical components ``(1/(a sin) d/dphi,
(1/a) d/dtheta)``; note the second is the southward-pointing component.
"""

from __future__ import annotations

import warnings
from functools import lru_cache

import numpy as np
import scipy.linalg

from . import series
from .constants import PhysicalConstants
from .fields import FieldParity, GridField
from .grid import Grid
from .transforms import (
    PRCoeffs,
    StdCoeffs,
    analyze_std,
    pr_class,
    pr_class_range,
    pr_to_std,
    project_pr,
    std_basis_kind,
    synthesize_std,
)


def _flip_parity(parity: FieldParity) -> FieldParity:
    return FieldParity.VECTOR if parity is FieldParity.SCALAR else FieldParity.SCALAR


def _cols_by_basis(M: int, parity: FieldParity) -> tuple[np.ndarray, np.ndarray]:
    m = np.arange(M + 1)
    even = m % 2 == 0
    if parity is FieldParity.VECTOR:
        even = ~even
    return m[even], m[~even]  # (cos-basis columns, sin-basis columns)


def _project_std_arrays(C, S, N: int, M: int, parity: FieldParity) -> PRCoeffs:
    """Least-squares PR projection of raw std arrays (rows may exceed N+1)."""
    pr = project_pr(StdCoeffs(N, M, parity, C, S))
    return PRCoeffs(N, M, parity, pr.C[: N + 1].copy(), pr.S[: N + 1].copy())


def _over_sin_from_pr(pr: PRCoeffs) -> tuple[np.ndarray, np.ndarray]:
    """Colatitude series of f_m(theta)/sin(theta) per m >= 1, exact per class;
    lands in the opposite-parity std basis.  m = 0 columns are left zero."""
    N, M = pr.N, pr.M
    C = np.zeros((N + 1, M + 1))
    S = np.zeros((N + 1, M + 1))
    for m in range(1, M + 1):
        cls = pr_class(m, pr.parity)
        lo, hi = pr_class_range(cls, N)
        for src, dst in ((pr.C, C), (pr.S, S)):
            col = src[lo : hi + 1, m]
            if cls == "cos_full":
                raise ValueError("f/sin(theta) is not polynomial for the cos_full class")
            if cls in ("sincos", "sinsin"):
                dst[lo : hi + 1, m] = col  # drop one sin(theta) factor
            else:  # sin2sin: sin(t) * sin-series -> cos series
                pad = np.zeros(1)
                dst[:, m] = series.pad_to(
                    series.mul_sin_sin(np.concatenate([pad, col])), N + 1
                )
    return C, S


def _dtheta_std(std: StdCoeffs) -> tuple[np.ndarray, np.ndarray]:
    """d/dtheta of every column; lands in the opposite-parity std basis."""
    N, M = std.N, std.M
    C = np.zeros((N + 1, M + 1))
    S = np.zeros((N + 1, M + 1))
    cos_ms, sin_ms = _cols_by_basis(M, std.parity)
    if cos_ms.size:
        C[:, cos_ms] = series.diff_cos(std.C[:, cos_ms])
        S[:, cos_ms] = series.diff_cos(std.S[:, cos_ms])
    if sin_ms.size:
        C[:, sin_ms] = series.diff_sin(std.C[:, sin_ms])
        S[:, sin_ms] = series.diff_sin(std.S[:, sin_ms])
    return C, S


# ---------------------------------------------------------------------------
# first-order operators


def gradient(
    pr: PRCoeffs, grid: Grid, consts: PhysicalConstants
) -> tuple[GridField, GridField]:
    """Spherical gradient components of a scalar: ``(1/(a sin th) df/dphi,
    (1/a) df/dtheta)``, returned as vector-parity grid fields."""
    if pr.parity is not FieldParity.SCALAR:
        raise ValueError("gradient expects scalar-parity coefficients")
    N, M = pr.N, pr.M
    a = consts.a
    m_row = np.arange(M + 1)[None, :]

    Cs, Ss = _over_sin_from_pr(pr)
    gu_C = (m_row / a) * Ss
    gu_S = -(m_row / a) * Cs

    dC, dS = _dtheta_std(pr_to_std(pr))
    vec = _flip_parity(pr.parity)
    uphi = synthesize_std(StdCoeffs(N, M, vec, gu_C, gu_S), grid)
    vtheta = synthesize_std(StdCoeffs(N, M, vec, dC / a, dS / a), grid)
    return uphi, vtheta


def gradient_uv(
    pr: PRCoeffs, grid: Grid, consts: PhysicalConstants
) -> tuple[GridField, GridField]:
    """Gradient as (eastward, northward) components."""
    gphi, gtheta = gradient(pr, grid, consts)
    gtheta.values = -gtheta.values
    return gphi, gtheta


def div_and_vort(
    u: GridField,
    v: GridField,
    consts: PhysicalConstants,
    M: int | None = None,
    N: int | None = None,
) -> tuple[PRCoeffs, PRCoeffs]:
    """Spectral divergence and radial vorticity of an (eastward, northward)
    wind field; scalar-parity outputs."""
    if u.parity is not FieldParity.VECTOR or v.parity is not FieldParity.VECTOR:
        raise ValueError("div_and_vort expects vector-parity fields")
    grid = u.grid
    if M is None:
        M = grid.m_lon // 2 - 1
    if N is None:
        N = grid.J - 2
    cu = analyze_std(u, M, N)
    cv = analyze_std(v, M, N)
    delta = _horizontal_combo(cu, cv, consts, sign=-1.0)
    zeta = _horizontal_combo(cv, cu, consts, sign=+1.0)
    return delta, zeta


def _combo_bracket(
    ca: StdCoeffs, cb: StdCoeffs, sign: float
) -> tuple[np.ndarray, np.ndarray]:
    """g = d(ca)/dphi + sign * d(cb sin)/dtheta per m (band N+2); this is
    ``a sin(theta)`` times the divergence/vorticity."""
    N, M = ca.N, ca.M
    g_C = np.zeros((N + 2, M + 1))
    g_S = np.zeros((N + 2, M + 1))
    cos_ms, sin_ms = _cols_by_basis(M, ca.parity)
    for ms, kind in ((cos_ms, "cos"), (sin_ms, "sin")):
        if not ms.size:
            continue
        mrow = ms[None, :].astype(float)
        if kind == "cos":
            tb_C = series.diff_sin(series.mul_sin_cos(cb.C[:, ms]))
            tb_S = series.diff_sin(series.mul_sin_cos(cb.S[:, ms]))
        else:
            tb_C = series.diff_cos(series.mul_sin_sin(cb.C[:, ms]))
            tb_S = series.diff_cos(series.mul_sin_sin(cb.S[:, ms]))
        g_C[:, ms] = series.pad_to(mrow * ca.S[:, ms], N + 2) + sign * series.pad_to(
            tb_C, N + 2
        )
        g_S[:, ms] = series.pad_to(-mrow * ca.C[:, ms], N + 2) + sign * series.pad_to(
            tb_S, N + 2
        )
    return g_C, g_S


def _horizontal_combo(
    ca: StdCoeffs, cb: StdCoeffs, consts: PhysicalConstants, sign: float
) -> PRCoeffs:
    """(1/(a sin))[d(ca)/dphi + sign * d(cb sin)/dtheta] as scalar PR coeffs.

    (ca, cb, sign) = (u, v, -1) gives the divergence, (v, u, +1) the radial
    vorticity.
    """
    N, M = ca.N, ca.M
    a = consts.a
    C = np.zeros((N + 1, M + 1))
    S = np.zeros((N + 1, M + 1))
    cos_ms, sin_ms = _cols_by_basis(M, ca.parity)
    g_C, g_S = _combo_bracket(ca, cb, sign)

    for ms, kind in ((cos_ms, "cos"), (sin_ms, "sin")):
        if not ms.size:
            continue
        if kind == "cos":
            out_C = series.div_sin_from_cos(g_C[:, ms])
            out_S = series.div_sin_from_cos(g_S[:, ms])
        else:
            out_C = series.div_sin_from_sin(g_C[:, ms])
            out_S = series.div_sin_from_sin(g_S[:, ms])
        C[:, ms] = series.pad_to(out_C, N + 1) / a
        S[:, ms] = series.pad_to(out_S, N + 1) / a
    S[:, 0] = 0.0
    return _project_std_arrays(C, S, N, M, _flip_parity(ca.parity))


def weighted_div_and_vort(
    u: GridField,
    v: GridField,
    consts: PhysicalConstants,
    M: int,
    N: int,
    filter_M0: int | None = None,
) -> tuple[StdCoeffs, StdCoeffs]:
    """``a^2 sin^2(theta)`` times (divergence, vorticity) as scalar-layout
    std coefficients, assembled with banded products only (no divisions).
    This is the premultiplied form the implicit solver consumes; it is
    operator-consistent with the banded Helmholtz/Poisson matrices."""
    cu = analyze_std(u, M, N, filter_M0)
    cv = analyze_std(v, M, N, filter_M0)
    a = consts.a
    out = []
    for ca, cb, sign in ((cu, cv, -1.0), (cv, cu, 1.0)):
        g_C, g_S = _combo_bracket(ca, cb, sign)
        C = np.zeros((N + 1, M + 1))
        S = np.zeros((N + 1, M + 1))
        cos_ms, sin_ms = _cols_by_basis(M, ca.parity)
        # a * sin(theta) * g; the bracket is sin-type on vector sin columns
        if sin_ms.size:
            C[:, sin_ms] = a * series.pad_to(series.mul_sin_sin(g_C[:, sin_ms]), N + 1)
            S[:, sin_ms] = a * series.pad_to(series.mul_sin_sin(g_S[:, sin_ms]), N + 1)
        if cos_ms.size:
            C[:, cos_ms] = a * series.pad_to(series.mul_sin_cos(g_C[:, cos_ms]), N + 1)
            S[:, cos_ms] = a * series.pad_to(series.mul_sin_cos(g_S[:, cos_ms]), N + 1)
        S[:, 0] = 0.0
        out.append(StdCoeffs(N, M, _flip_parity(ca.parity), C, S))
    return out[0], out[1]


# ---------------------------------------------------------------------------
# Laplacian


def _laplacian_columns(x: np.ndarray, kind: str, ms: np.ndarray, a: float) -> np.ndarray:
    """a^2 sin^2 Lap = sin^2 f'' + sin cos f' - m^2 f, then two exact
    divisions by sin(theta); columns share one basis kind."""
    if kind == "cos":
        d1 = series.diff_cos(x)  # sin series
        d2 = series.diff_sin(d1)  # cos series
        q = series.mul_sin_sin(series.mul_sin_cos(d2))  # sin^2 f'' (cos)
        q += series.mul_sin_sin(series.mul_cos_sin(d1))  # sin cos f' (cos)
        q -= series.pad_to((ms[None, :] ** 2) * x, q.shape[0])
        y = series.div_sin_from_cos(q)
        z = series.div_sin_from_sin(y)
    else:
        d1 = series.diff_sin(x)  # cos series
        d2 = series.diff_cos(d1)  # sin series
        q = series.mul_sin_cos(series.mul_sin_sin(d2))
        q += series.mul_sin_cos(series.mul_cos_cos(d1))
        q -= series.pad_to((ms[None, :] ** 2) * x, q.shape[0])
        y = series.div_sin_from_sin(q)
        z = series.div_sin_from_cos(y)
    return z / (a * a)


def laplacian(pr: PRCoeffs, consts: PhysicalConstants) -> PRCoeffs:
    """Surface Laplacian of a scalar (1/a^2 included)."""
    if pr.parity is not FieldParity.SCALAR:
        raise ValueError("laplacian expects scalar-parity coefficients")
    N, M = pr.N, pr.M
    std = pr_to_std(pr)
    C = np.zeros((N + 2, M + 1))
    S = np.zeros((N + 2, M + 1))
    cos_ms, sin_ms = _cols_by_basis(M, std.parity)
    for ms, kind in ((cos_ms, "cos"), (sin_ms, "sin")):
        if not ms.size:
            continue
        C[:, ms] = series.pad_to(_laplacian_columns(std.C[:, ms], kind, ms, consts.a), N + 2)
        S[:, ms] = series.pad_to(_laplacian_columns(std.S[:, ms], kind, ms, consts.a), N + 2)
    S[:, 0] = 0.0
    return _project_std_arrays(C[: N + 1], S[: N + 1], N, M, pr.parity)


# ---------------------------------------------------------------------------
# banded elliptic machinery


@lru_cache(maxsize=16)
def _band_operators(kind: str, N: int) -> tuple[np.ndarray, np.ndarray]:
    """Banded (l=u=2) storage of sin^2-multiplication S2 and the reduced
    operator L = sin^2 d^2 + sin cos d (without the -m^2 term), truncated to
    harmonics 0..N.  Band row 2+i-j, column j."""
    size = N + 1
    S2 = np.zeros((5, size))
    L = np.zeros((5, size))

    def put(ab, i, j, val):
        if 0 <= i < size and abs(i - j) <= 2:
            ab[2 + i - j, j] += val

    if kind == "cos":
        for j in range(size):
            put(S2, j, j, 0.5)
            put(S2, j + 2, j, -0.25)
            put(S2, abs(j - 2), j, -0.25)
            put(L, j, j, -0.5 * j * j)
            put(L, j + 2, j, 0.25 * (j * j + j))
            put(L, abs(j - 2), j, 0.25 * (j * j - j))
    else:
        # sin basis: harmonic 0 is structural; pin it with an identity row
        put(S2, 0, 0, 1.0)
        for j in range(1, size):
            put(S2, j, j, 0.5)
            put(S2, j + 2, j, -0.25)
            if j - 2 >= 1:
                put(S2, j - 2, j, -0.25)
            if j == 1:
                put(S2, 1, 1, 0.25)  # sin(-t) fold
            put(L, j, j, -0.5 * j * j)
            put(L, j + 2, j, 0.25 * (j * j + j))
            if j - 2 >= 1:
                put(L, j - 2, j, 0.25 * (j * j - j))
    return S2, L


@lru_cache(maxsize=16)
def _sin2_diag_correction(kind: str, N: int) -> np.ndarray:
    """Diagonal carrier for the -m^2 f term (identity on active harmonics)."""
    d = np.ones(N + 1)
    if kind == "sin":
        d[0] = 0.0
    return d


def _band_matvec(ab: np.ndarray, x: np.ndarray) -> np.ndarray:
    """y = A x for banded (2,2) storage; x may have trailing columns."""
    size = ab.shape[1]
    y = np.zeros_like(x)
    for d in range(-2, 3):
        js = np.arange(max(0, -d), min(size, size - d))
        vals = ab[2 + d, js]
        y[js + d] += vals[(slice(None),) + (None,) * (x.ndim - 1)] * x[js]
    return y


def _band_matvec_stack(ab: np.ndarray, x: np.ndarray) -> np.ndarray:
    """y_k = A_k x_k for stacks ab (K, 5, n), x (K, n, r)."""
    y = np.zeros_like(x)
    n = ab.shape[2]
    for d in range(-2, 3):
        js = np.arange(max(0, -d), min(n, n - d))
        y[:, js + d, :] += ab[:, 2 + d, js][:, :, None] * x[:, js, :]
    return y


def _solve_banded_stack(ab: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Solve many independent (2,2)-banded systems at once.

    ``ab`` is a (K, 5, n) stack in ``solve_banded`` layout, ``b`` a (K, n, r)
    stack of right-hand sides.  Gaussian elimination without pivoting; the
    systems here are (weakly) diagonally dominant.
    """
    K, _, n = ab.shape
    u2 = ab[:, 0, :].copy()
    u1 = ab[:, 1, :].copy()
    d0 = ab[:, 2, :].copy()
    l1 = ab[:, 3, :].copy()
    l2 = ab[:, 4, :].copy()
    b = b.copy()
    for j in range(n - 1):
        piv = d0[:, j]
        f1 = l1[:, j] / piv
        d0[:, j + 1] -= f1 * u1[:, j + 1]
        b[:, j + 1] -= f1[:, None] * b[:, j]
        if j + 2 < n:
            u1[:, j + 2] -= f1 * u2[:, j + 2]
            f2 = l2[:, j] / piv
            l1[:, j + 1] -= f2 * u1[:, j + 1]
            d0[:, j + 2] -= f2 * u2[:, j + 2]
            b[:, j + 2] -= f2[:, None] * b[:, j]
    x = np.empty_like(b)
    x[:, n - 1] = b[:, n - 1] / d0[:, n - 1, None]
    if n >= 2:
        x[:, n - 2] = (b[:, n - 2] - u1[:, n - 1, None] * x[:, n - 1]) / d0[:, n - 2, None]
    for j in range(n - 3, -1, -1):
        x[:, j] = (
            b[:, j] - u1[:, j + 1, None] * x[:, j + 1] - u2[:, j + 2, None] * x[:, j + 2]
        ) / d0[:, j, None]
    return x


@lru_cache(maxsize=32)
def _mode_operator_stacks(kind: str, N: int, M: int):
    """(S2, L - m^2) band stacks for all zonal wavenumbers of one basis kind."""
    S2, L = _band_operators(kind, N)
    ms = np.arange(M + 1)
    carrier = _sin2_diag_correction(kind, N)
    Lm = np.broadcast_to(L, (M + 1, 5, N + 1)).copy()
    Lm[:, 2, :] -= (ms[:, None] ** 2).astype(float) * carrier[None, :]
    S2s = np.broadcast_to(S2, (M + 1, 5, N + 1)).copy()
    S2s.setflags(write=False)
    Lm.setflags(write=False)
    return S2s, Lm


def _gauge_stack(B: np.ndarray, rhs: np.ndarray, kind: str, ms: np.ndarray) -> None:
    """Pin the structural/nullspace rows of potential solves in place."""
    if kind == "sin":
        B[:, 2, 0] = 1.0
        rhs[:, 0] = 0.0
    if kind == "cos" and ms[0] == 0:
        B[0, 2, 0] = 1.0
        B[0, 1, 1] = 0.0
        B[0, 0, 2] = 0.0
        rhs[0, 0] = 0.0


def _gather_cols(*objs_cols) -> np.ndarray:
    """Stack per-m right-hand-side columns: ((arr, ms), ...) -> (K, n, r)."""
    pieces = [arr[:, ms].T[:, :, None] for arr, ms in objs_cols]
    return np.concatenate(pieces, axis=2)


def sisl_implicit_modes(
    bdiv: StdCoeffs,
    bvort: StdCoeffs,
    ch: StdCoeffs,
    c: float,
    coef_rh: float,
    consts: PhysicalConstants,
) -> tuple[StdCoeffs, StdCoeffs, StdCoeffs]:
    """Per-wavenumber solve of the premultiplied semi-implicit system::

        (a^2 S2 - c (L - m^2)) delta = bdiv - coef_rh (L - m^2) ch
        (L - m^2) chi = a^2 S2 delta        (constant mode gauged to zero)
        (L - m^2) psi = bvort

    ``bdiv``/``bvort`` are the a^2 sin^2-weighted divergence/vorticity of the
    transported momentum (``weighted_div_and_vort``) and ``ch`` the std
    coefficients of the transported height.  Using one family of truncated
    banded operators on both sides keeps the gravity-wave update neutral for
    every resolvable mode, including the near-pole band edge.  All zonal
    wavenumbers of one basis kind are eliminated in one batched sweep.
    """
    N, M = ch.N, ch.M
    a2 = consts.a**2
    dC = np.zeros((N + 1, M + 1))
    dS = np.zeros((N + 1, M + 1))
    chiC = np.zeros((N + 1, M + 1))
    chiS = np.zeros((N + 1, M + 1))
    psiC = np.zeros((N + 1, M + 1))
    psiS = np.zeros((N + 1, M + 1))
    cos_ms, sin_ms = _cols_by_basis(M, ch.parity)

    for ms, kind in ((cos_ms, "cos"), (sin_ms, "sin")):
        if not ms.size:
            continue
        S2s, Lms = _mode_operator_stacks(kind, N, M)
        S2k, Lmk = S2s[ms], Lms[ms]
        rhs = _gather_cols((bdiv.C, ms), (bdiv.S, ms)) - coef_rh * _band_matvec_stack(
            Lmk, _gather_cols((ch.C, ms), (ch.S, ms))
        )
        sol = _solve_banded_stack(a2 * S2k - c * Lmk, rhs)
        dC[:, ms] = sol[:, :, 0].T
        dS[:, ms] = sol[:, :, 1].T

        B = Lmk.copy()
        rhs_pot = np.concatenate(
            [a2 * _band_matvec_stack(S2k, sol), _gather_cols((bvort.C, ms), (bvort.S, ms))],
            axis=2,
        )
        _gauge_stack(B, rhs_pot, kind, ms)
        pot = _solve_banded_stack(B, rhs_pot)
        chiC[:, ms] = pot[:, :, 0].T
        chiS[:, ms] = pot[:, :, 1].T
        psiC[:, ms] = pot[:, :, 2].T
        psiS[:, ms] = pot[:, :, 3].T

    for arr in (dS, chiS, psiS):
        arr[:, 0] = 0.0
    par = ch.parity
    return (
        StdCoeffs(N, M, par, dC, dS),
        StdCoeffs(N, M, par, chiC, chiS),
        StdCoeffs(N, M, par, psiC, psiS),
    )


def solve_helmholtz(rhs: PRCoeffs, c: float, consts: PhysicalConstants) -> PRCoeffs:
    """Solve (1 - c Lap) f = rhs, c >= 0 in m^2."""
    if c < 0:
        raise ValueError("Helmholtz coefficient must be non-negative")
    if c == 0.0:
        return rhs.copy()
    return _solve_modes(rhs, consts, helmholtz_c=c)


def solve_poisson(rhs: PRCoeffs, consts: PhysicalConstants) -> PRCoeffs:
    """Solve Lap f = rhs with the mean-zero gauge (constant mode of f is 0).

    The constant mode of ``rhs`` is zeroed first; a warning is issued when it
    is significant relative to the coefficient norm.
    """
    rhs = rhs.copy()
    norm = max(np.abs(rhs.C).max(), np.abs(rhs.S).max(), 1e-300)
    if abs(rhs.C[0, 0]) > 1e-8 * norm:
        warnings.warn(
            f"Poisson right-hand side has a constant mode of relative size "
            f"{abs(rhs.C[0, 0]) / norm:.2e}; it is projected out",
            stacklevel=2,
        )
    rhs.C[0, 0] = 0.0
    return _solve_modes(rhs, consts, helmholtz_c=None)


def _solve_modes(
    rhs: PRCoeffs, consts: PhysicalConstants, helmholtz_c: float | None
) -> PRCoeffs:
    """Driver for the standalone Helmholtz/Poisson surface."""
    N, M = rhs.N, rhs.M
    a2 = consts.a**2
    std = pr_to_std(rhs)
    C = np.zeros((N + 1, M + 1))
    S = np.zeros((N + 1, M + 1))
    cos_ms, sin_ms = _cols_by_basis(M, rhs.parity)

    for ms, kind in ((cos_ms, "cos"), (sin_ms, "sin")):
        if not ms.size:
            continue
        S2s, Lms = _mode_operator_stacks(kind, N, M)
        S2k, Lmk = S2s[ms], Lms[ms]
        b = a2 * _band_matvec_stack(S2k, _gather_cols((std.C, ms), (std.S, ms)))
        if helmholtz_c is None:
            A = Lmk.copy()
            _gauge_stack(A, b, kind, ms)
        else:
            A = a2 * S2k - helmholtz_c * Lmk
        sol = _solve_banded_stack(A, b)
        C[:, ms] = sol[:, :, 0].T
        S[:, ms] = sol[:, :, 1].T
    S[:, 0] = 0.0
    return _project_std_arrays(C, S, N, M, rhs.parity)


# ---------------------------------------------------------------------------
# vector fields through their potentials


def velocity_series_from_potentials(
    chi: PRCoeffs, psi: PRCoeffs, consts: PhysicalConstants
) -> tuple[StdCoeffs, StdCoeffs]:
    """Std-basis series of the wind components::

        u = (1/(a sin th)) dchi/dphi + (1/a) dpsi/dtheta
        v = -(1/a) dchi/dtheta + (1/(a sin th)) dpsi/dphi
    """
    if chi.parity is not FieldParity.SCALAR or psi.parity is not FieldParity.SCALAR:
        raise ValueError("potentials must be scalar parity")
    N, M = chi.N, chi.M
    a = consts.a
    m_row = np.arange(M + 1)[None, :]

    chis_C, chis_S = _over_sin_from_pr(chi)
    psis_C, psis_S = _over_sin_from_pr(psi)
    dchi_C, dchi_S = _dtheta_std(pr_to_std(chi))
    dpsi_C, dpsi_S = _dtheta_std(pr_to_std(psi))

    u_C = (m_row / a) * chis_S + dpsi_C / a
    u_S = -(m_row / a) * chis_C + dpsi_S / a
    v_C = -dchi_C / a + (m_row / a) * psis_S
    v_S = -dchi_S / a - (m_row / a) * psis_C

    vec = FieldParity.VECTOR
    return StdCoeffs(N, M, vec, u_C, u_S), StdCoeffs(N, M, vec, v_C, v_S)


def velocity_from_potentials(
    chi: PRCoeffs, psi: PRCoeffs, grid: Grid, consts: PhysicalConstants
) -> tuple[GridField, GridField]:
    """Wind fields from velocity potential and streamfunction."""
    cu, cv = velocity_series_from_potentials(chi, psi, consts)
    return synthesize_std(cu, grid), synthesize_std(cv, grid)


def potentials_from_wind(
    u: GridField,
    v: GridField,
    consts: PhysicalConstants,
    M: int | None = None,
    N: int | None = None,
    filter_M0: int | None = None,
) -> tuple[PRCoeffs, PRCoeffs]:
    """Velocity potential and streamfunction of a wind field, from the
    premultiplied Poisson problems ``(L - m^2) chi = a^2 sin^2 div`` and
    ``(L - m^2) psi = a^2 sin^2 vort`` (constant modes gauged to zero)."""
    grid = u.grid
    if M is None:
        M = grid.m_lon // 2 - 1
    if N is None:
        N = grid.J - 2
    bdiv, bvort = weighted_div_and_vort(u, v, consts, M, N, filter_M0)
    chiC = np.zeros((N + 1, M + 1))
    chiS = np.zeros((N + 1, M + 1))
    psiC = np.zeros((N + 1, M + 1))
    psiS = np.zeros((N + 1, M + 1))
    cos_ms, sin_ms = _cols_by_basis(M, FieldParity.SCALAR)

    for ms, kind in ((cos_ms, "cos"), (sin_ms, "sin")):
        if not ms.size:
            continue
        _, Lms = _mode_operator_stacks(kind, N, M)
        B = Lms[ms].copy()
        rhs = _gather_cols((bdiv.C, ms), (bdiv.S, ms), (bvort.C, ms), (bvort.S, ms))
        _gauge_stack(B, rhs, kind, ms)
        sol = _solve_banded_stack(B, rhs)
        chiC[:, ms] = sol[:, :, 0].T
        chiS[:, ms] = sol[:, :, 1].T
        psiC[:, ms] = sol[:, :, 2].T
        psiS[:, ms] = sol[:, :, 3].T

    for arr in (chiS, psiS):
        arr[:, 0] = 0.0
    par = FieldParity.SCALAR
    return (
        project_pr(StdCoeffs(N, M, par, chiC, chiS)),
        project_pr(StdCoeffs(N, M, par, psiC, psiS)),
    )
