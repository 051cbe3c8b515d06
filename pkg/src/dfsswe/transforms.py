"""Double-Fourier analysis and synthesis on the sphere.

Three coefficient representations of a field sampled on a latitude-longitude
grid:

* ``StdCoeffs`` -- the plain double Fourier series.  Scalar fields use a
  ``cos(n theta)`` colatitude basis for even zonal wavenumbers m and
  ``sin(n theta)`` for odd m (vector components swap the roles).
* ``PRCoeffs`` -- the pole-regular subspace (Yoshimura 2022).  Per-m
  colatitude bases::

      m = 0                cos(n t),            n = 0..N
      m = 1                sin(t) cos(n t),     n = 0..N-1
      m >= 2 even          sin(t) sin(n t),     n = 1..N-1
      m >= 3 odd           sin(t)^2 sin(n t),   n = 1..N-2

  (classes keyed by m parity swap for vector components).  Fields in this
  subspace are continuous on the sphere with pole-safe first derivatives,
  which is what lets wind components be treated like scalars.
* ``ComplexCoeffs`` -- the equivalent bivariate complex-exponential series
  ``sum f[n,m] exp(i n theta) exp(i m phi)`` used for evaluation at scattered
  points.

Projection onto the pole-regular subspace is the L2(theta) least-squares fit
per zonal wavenumber; the Gram matrices of the four basis classes are
pentadiagonal at worst and are assembled analytically from product-to-sum
identities.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
import scipy.fft
import scipy.linalg

from . import series
from .fields import FieldParity, GridField
from .grid import Grid, GridKind, build_grid, max_truncation_n


# ---------------------------------------------------------------------------
# coefficient containers


@dataclass
class StdCoeffs:
    """Plain double Fourier coefficients.

    ``C[n, m]`` multiplies ``basis_n(theta) * cos(m phi)`` and ``S[n, m]``
    the ``sin(m phi)`` side; the colatitude basis of column m is cos- or
    sin-type depending on ``parity`` (see ``std_basis_kind``).  Row 0 of
    sin-type columns and all of ``S[:, 0]`` are structurally zero.
    """

    N: int
    M: int
    parity: FieldParity
    C: np.ndarray
    S: np.ndarray

    def copy(self) -> "StdCoeffs":
        return StdCoeffs(self.N, self.M, self.parity, self.C.copy(), self.S.copy())


@dataclass
class PRCoeffs:
    """Coefficients in the pole-regular basis; same storage layout as
    ``StdCoeffs`` with per-class valid n-ranges (entries outside are zero)."""

    N: int
    M: int
    parity: FieldParity
    C: np.ndarray
    S: np.ndarray

    def copy(self) -> "PRCoeffs":
        return PRCoeffs(self.N, self.M, self.parity, self.C.copy(), self.S.copy())


@dataclass
class ComplexCoeffs:
    """Bivariate complex Fourier coefficients ``F[n + N, m + M]`` for
    ``exp(i n theta) exp(i m phi)``, n in [-N, N], m in [-M, M]."""

    N: int
    M: int
    F: np.ndarray


def std_basis_kind(m: int, parity: FieldParity) -> str:
    """'cos' or 'sin' colatitude basis for zonal wavenumber m."""
    even = m % 2 == 0
    if parity is FieldParity.VECTOR:
        even = not even
    return "cos" if even else "sin"


def pr_class(m: int, parity: FieldParity) -> str:
    """Pole-regular basis class for zonal wavenumber m."""
    if parity is FieldParity.SCALAR:
        if m == 0:
            return "cos_full"
        if m == 1:
            return "sincos"
        return "sinsin" if m % 2 == 0 else "sin2sin"
    if m == 1:
        return "cos_full"
    if m == 0:
        return "sincos"
    return "sinsin" if m % 2 == 1 else "sin2sin"


def pr_class_range(cls: str, N: int) -> tuple[int, int]:
    """Inclusive n-range of a class at truncation N."""
    return {
        "cos_full": (0, N),
        "sincos": (0, N - 1),
        "sinsin": (1, N - 1),
        "sin2sin": (1, N - 2),
    }[cls]


def lincomb(alpha: float, x, beta: float = 0.0, y=None):
    """alpha*x + beta*y for two coefficient objects of identical layout."""
    if y is None:
        return type(x)(x.N, x.M, x.parity, alpha * x.C, alpha * x.S)
    if (x.N, x.M, x.parity) != (y.N, y.M, y.parity) or type(x) is not type(y):
        raise ValueError("coefficient layouts do not match")
    return type(x)(x.N, x.M, x.parity, alpha * x.C + beta * y.C, alpha * x.S + beta * y.S)


# ---------------------------------------------------------------------------
# cached per-grid colatitude operators


@dataclass(frozen=True)
class _ThetaOps:
    eval_cos: np.ndarray  # (N_lat, N+1)
    eval_sin: np.ndarray
    fit_cos: np.ndarray  # (N+1, N_lat)
    fit_sin: np.ndarray


@lru_cache(maxsize=16)
def _theta_ops_full(kind: GridKind, J: int) -> _ThetaOps:
    """Square interpolatory colatitude transforms at the grid's full rank.

    Using the full-rank (FCT/FST-like) transform and truncating afterwards
    keeps mask-then-reanalyze operations idempotent; an overdetermined
    least-squares fit would extrapolate mid-latitude content back into
    masked polar rings.
    """
    grid = build_grid(kind, J)
    theta = grid.colatitudes
    n_cos = grid.n_lat - 1  # cos harmonics 0..n_cos
    ec = np.cos(np.outer(theta, np.arange(n_cos + 1)))
    fc = np.linalg.pinv(ec, rcond=1e-12)

    if kind is GridKind.GRID_1:
        # pole rows carry no sine information; invert on the interior
        n_sin = grid.n_lat - 2
        es = np.sin(np.outer(theta, np.arange(n_sin + 1)))
        fs_int = np.linalg.pinv(es[1:-1, 1:], rcond=1e-12)
        fs = np.zeros((n_sin + 1, theta.size))
        fs[1:, 1:-1] = fs_int
    else:
        n_sin = grid.n_lat
        es = np.sin(np.outer(theta, np.arange(n_sin + 1)))
        fs = np.vstack(
            [np.zeros((1, theta.size)), np.linalg.pinv(es[:, 1:], rcond=1e-12)]
        )
    return _ThetaOps(ec, es, fc, fs)


@lru_cache(maxsize=64)
def _theta_ops(kind: GridKind, J: int, N: int) -> _ThetaOps:
    full = _theta_ops_full(kind, J)
    ec = full.eval_cos[:, : N + 1]
    es = np.sin(np.outer(build_grid(kind, J).colatitudes, np.arange(N + 1)))
    fc = full.fit_cos[: N + 1]
    fs = full.fit_sin[: N + 1]
    return _ThetaOps(ec, es, fc, fs)


def _check_truncation(grid: Grid, M: int, N: int) -> None:
    if M > grid.m_lon // 2 - 1:
        raise ValueError(f"M={M} exceeds longitude resolution (max {grid.m_lon // 2 - 1})")
    if N > max_truncation_n(grid):
        raise ValueError(f"N={N} exceeds colatitude resolution (max {max_truncation_n(grid)})")
    if N < 4:
        raise ValueError("truncation N must be at least 4")


def _parity_masks(M: int, parity: FieldParity) -> tuple[np.ndarray, np.ndarray]:
    m = np.arange(M + 1)
    cos_cols = (m % 2 == 0) if parity is FieldParity.SCALAR else (m % 2 == 1)
    return cos_cols, ~cos_cols


# ---------------------------------------------------------------------------
# analysis / synthesis


@lru_cache(maxsize=4096)
def _filtered_fit_ops(kind: GridKind, J: int, n_excl: int) -> tuple[np.ndarray, np.ndarray]:
    """Colatitude fit operators using only rows ``n_excl..n_lat-1-n_excl``
    (the rings that resolve the zonal wavenumber being fit).  Zero columns
    for the excluded rows keep the shapes uniform."""
    grid = build_grid(kind, J)
    full = _theta_ops_full(kind, J)
    rows = slice(n_excl, grid.n_lat - n_excl)
    out = []
    for eval_mat, n_coef in ((full.eval_cos, full.fit_cos.shape[0]),
                             (np.sin(np.outer(grid.colatitudes, np.arange(full.fit_sin.shape[0]))), full.fit_sin.shape[0])):
        sub = eval_mat[rows, :n_coef]
        fit = np.zeros((n_coef, grid.n_lat))
        fit[:, rows] = np.linalg.pinv(sub, rcond=1e-10)
        out.append(fit)
    out[1][0] = 0.0
    return out[0], out[1]


def _excluded_rows(grid: Grid, m: int, M: int, M0: int) -> int:
    """Polar rows (per hemisphere) whose zonal cutoff lies below m."""
    cutoff = np.minimum(M, M0 + M * np.sin(grid.colatitudes))
    bad = cutoff < m
    n_north = int(np.argmin(bad)) if bad.any() else 0
    return n_north if bad[0] else 0


def analyze_std(
    field: GridField, M: int, N: int, filter_M0: int | None = None
) -> StdCoeffs:
    """Fit the double Fourier series to grid samples (FFT in longitude,
    interpolatory colatitude fit, exact on band-limited data).

    With ``filter_M0`` the zonal filter is built into the analysis: the
    colatitude profile of wavenumber m is fit using only the rings where
    ``m <= min(M, M0 + M sin(theta))``.  Polar rings neither contribute
    their (unresolvable) high-m content nor force the fit through masked
    zeros, so the resulting series stays smooth up to the poles.
    """
    grid = field.grid
    _check_truncation(grid, M, N)
    ops = _theta_ops(grid.kind, grid.J, N)
    m_lon = grid.m_lon

    fhat = scipy.fft.rfft(field.values, axis=1)
    a = np.empty((grid.n_lat, M + 1))
    b = np.zeros((grid.n_lat, M + 1))
    a[:, 0] = fhat[:, 0].real / m_lon
    a[:, 1:] = 2.0 * fhat[:, 1 : M + 1].real / m_lon
    b[:, 1:] = -2.0 * fhat[:, 1 : M + 1].imag / m_lon

    C = np.zeros((N + 1, M + 1))
    S = np.zeros((N + 1, M + 1))
    cos_cols, sin_cols = _parity_masks(M, field.parity)

    if filter_M0 is None:
        groups = [(0, np.arange(M + 1))]
    else:
        n_excl = np.array([_excluded_rows(grid, m, M, filter_M0) for m in range(M + 1)])
        groups = [(k, np.flatnonzero(n_excl == k)) for k in np.unique(n_excl)]

    for k, ms in groups:
        if not ms.size:
            continue
        if k == 0:
            fit_cos, fit_sin = ops.fit_cos, ops.fit_sin
        else:
            fc_full, fs_full = _filtered_fit_ops(grid.kind, grid.J, int(k))
            fit_cos, fit_sin = fc_full[: N + 1], fs_full[: N + 1]
        mc = ms[cos_cols[ms]]
        msn = ms[sin_cols[ms]]
        if mc.size:
            C[:, mc] = fit_cos @ a[:, mc]
            S[:, mc] = fit_cos @ b[:, mc]
        if msn.size:
            C[:, msn] = fit_sin @ a[:, msn]
            S[:, msn] = fit_sin @ b[:, msn]
    S[:, 0] = 0.0
    return StdCoeffs(N, M, field.parity, C, S)


def synthesize_std(coeffs: StdCoeffs, grid: Grid) -> GridField:
    """Evaluate the double series at all grid nodes."""
    N, M = coeffs.N, coeffs.M
    _check_truncation(grid, M, N)
    ops = _theta_ops(grid.kind, grid.J, N)
    m_lon = grid.m_lon

    a = np.zeros((grid.n_lat, M + 1))
    b = np.zeros((grid.n_lat, M + 1))
    cos_cols, sin_cols = _parity_masks(M, coeffs.parity)
    if np.any(cos_cols):
        a[:, cos_cols] = ops.eval_cos @ coeffs.C[:, cos_cols]
        b[:, cos_cols] = ops.eval_cos @ coeffs.S[:, cos_cols]
    if np.any(sin_cols):
        a[:, sin_cols] = ops.eval_sin @ coeffs.C[:, sin_cols]
        b[:, sin_cols] = ops.eval_sin @ coeffs.S[:, sin_cols]

    fhat = np.zeros((grid.n_lat, m_lon // 2 + 1), dtype=complex)
    fhat[:, 0] = a[:, 0] * m_lon
    fhat[:, 1 : M + 1] = (a[:, 1:] - 1j * b[:, 1:]) * (m_lon / 2.0)
    values = scipy.fft.irfft(fhat, n=m_lon, axis=1)
    return GridField(grid, coeffs.parity, values)


# ---------------------------------------------------------------------------
# least-squares projection onto the pole-regular subspace


def _gram_banded(cls: str, size: int) -> np.ndarray:
    """Symmetric banded Gram matrix in upper 'solveh_banded' storage."""
    if cls == "sincos":
        # basis sin(t)cos(nt), n = 0..size-1
        n = np.arange(size)
        diag = np.full(size, np.pi / 4.0)
        diag[n == 0] = np.pi / 2.0
        diag[n == 1] = np.pi / 8.0
        off2 = np.full(max(size - 2, 0), -np.pi / 8.0)
        if size > 2:
            off2[0] = -np.pi / 4.0  # (0,2) entry also hits the n+k=2 coupling
        bw = 2
    elif cls == "sinsin":
        # basis sin(t)sin(nt), n = 1..size
        n = np.arange(1, size + 1)
        diag = np.full(size, np.pi / 4.0)
        diag[n == 1] = 3.0 * np.pi / 8.0
        off2 = np.full(max(size - 2, 0), -np.pi / 8.0)
        bw = 2
    elif cls == "sin2sin":
        # basis sin(t)^2 sin(nt), n = 1..size
        n = np.arange(1, size + 1)
        diag = np.full(size, 3.0 * np.pi / 16.0)
        diag[n == 1] += np.pi / 8.0  # n+k=2
        diag[n == 2] -= np.pi / 32.0  # n+k=4
        off2 = np.full(max(size - 2, 0), -np.pi / 8.0)
        off4 = np.full(max(size - 4, 0), np.pi / 32.0)
        ab = np.zeros((5, size))
        ab[4] = diag
        ab[2, 2:] = off2
        ab[0, 4:] = off4
        # n+k=4 coupling between n=1 and k=3 sits on the +-2 band
        if size >= 3:
            ab[2, 2] -= np.pi / 32.0
        return ab
    else:
        raise ValueError(cls)
    ab = np.zeros((bw + 1, size))
    ab[bw] = diag
    if size > 2:
        ab[0, 2:] = off2
    return ab


@lru_cache(maxsize=64)
def _gram_cholesky(cls: str, size: int):
    ab = _gram_banded(cls, size)
    return scipy.linalg.cholesky_banded(ab, lower=False)


def _pr_rhs(cls: str, col: np.ndarray, N: int) -> np.ndarray:
    """Inner products of a std-basis column against the class basis."""
    K = col.shape[0] - 1

    def g(i):
        if 0 <= i <= K:
            return col[i]
        return np.zeros(col.shape[1:])

    if cls == "sincos":
        size = N
        rhs = np.zeros((size,) + col.shape[1:])
        if size > 0:
            rhs[0] = (np.pi / 2.0) * g(1)
        if size > 1:
            rhs[1] = (np.pi / 4.0) * g(2)
        for n in range(2, size):
            rhs[n] = (np.pi / 4.0) * (g(n + 1) - g(n - 1))
    elif cls == "sinsin":
        size = N - 1
        rhs = np.zeros((size,) + col.shape[1:])
        if size > 0:
            rhs[0] = (np.pi / 4.0) * (2.0 * g(0) - g(2))
        for i in range(1, size):
            n = i + 1
            rhs[i] = (np.pi / 4.0) * (g(n - 1) - g(n + 1))
    elif cls == "sin2sin":
        size = N - 2
        rhs = np.zeros((size,) + col.shape[1:])
        if size > 0:
            rhs[0] = (3.0 * np.pi / 8.0) * g(1) - (np.pi / 8.0) * g(3)
        if size > 1:
            rhs[1] = (np.pi / 4.0) * g(2) - (np.pi / 8.0) * g(4)
        for i in range(2, size):
            n = i + 1
            rhs[i] = (np.pi / 4.0) * g(n) - (np.pi / 8.0) * (g(n + 2) + g(n - 2))
    else:
        raise ValueError(cls)
    return rhs


def project_pr(std: StdCoeffs) -> PRCoeffs:
    """L2-project a std series onto the pole-regular subspace (per-m banded
    least-squares; exact on inputs already in the subspace)."""
    N, M = std.N, std.M
    C = np.zeros_like(std.C)
    S = np.zeros_like(std.S)

    by_class: dict[str, list[int]] = {}
    for m in range(M + 1):
        by_class.setdefault(pr_class(m, std.parity), []).append(m)

    for cls, ms in by_class.items():
        ms = np.asarray(ms)
        if cls == "cos_full":
            C[:, ms] = std.C[:, ms]
            S[:, ms] = std.S[:, ms]
            continue
        lo, hi = pr_class_range(cls, N)
        size = hi - lo + 1
        if size <= 0:
            continue
        cho = _gram_cholesky(cls, size)
        rhs = np.concatenate(
            [_pr_rhs(cls, std.C[:, ms], N), _pr_rhs(cls, std.S[:, ms], N)], axis=1
        )
        sol = scipy.linalg.cho_solve_banded((cho, False), rhs)
        k = ms.size
        C[lo : hi + 1, ms] = sol[:, :k]
        S[lo : hi + 1, ms] = sol[:, k:]
    S[:, 0] = 0.0
    return PRCoeffs(N, M, std.parity, C, S)


def pr_to_std(pr: PRCoeffs) -> StdCoeffs:
    """Exact re-expansion of the pole-regular series in the std basis."""
    N, M = pr.N, pr.M
    C = np.zeros_like(pr.C)
    S = np.zeros_like(pr.S)

    by_class: dict[str, list[int]] = {}
    for m in range(M + 1):
        by_class.setdefault(pr_class(m, pr.parity), []).append(m)

    for cls, ms in by_class.items():
        ms = np.asarray(ms)
        if cls == "cos_full":
            C[:, ms] = pr.C[:, ms]
            S[:, ms] = pr.S[:, ms]
            continue
        lo, hi = pr_class_range(cls, N)
        for side_in, side_out in ((pr.C, C), (pr.S, S)):
            block = side_in[lo : hi + 1, ms]
            if cls == "sincos":
                out = series.mul_sin_cos(block)  # sin series, harmonics 1..N
            elif cls == "sinsin":
                pad = np.zeros((1,) + block.shape[1:])
                out = series.mul_sin_sin(np.concatenate([pad, block], axis=0))
            else:  # sin2sin
                pad = np.zeros((1,) + block.shape[1:])
                out = series.mul_sin_cos(
                    series.mul_sin_sin(np.concatenate([pad, block], axis=0))
                )
            side_out[:, ms] = series.pad_to(out, N + 1)
    S[:, 0] = 0.0
    return StdCoeffs(N, M, pr.parity, C, S)


def std_to_complex(std: StdCoeffs) -> ComplexCoeffs:
    """Recast the real double series as a bivariate complex-exponential series."""
    N, M = std.N, std.M
    F = np.zeros((2 * N + 1, 2 * M + 1), dtype=complex)
    n = np.arange(N + 1)

    for m in range(M + 1):
        kind = std_basis_kind(m, std.parity)
        for col, phi_sign in ((std.C[:, m], "cos"), (std.S[:, m], "sin")):
            if m == 0 and phi_sign == "sin":
                continue
            e = np.zeros(2 * N + 1, dtype=complex)
            if kind == "cos":
                e[N] = col[0]
                e[N + n[1:]] += 0.5 * col[1:]
                e[N - n[1:]] += 0.5 * col[1:]
            else:
                e[N + n[1:]] += -0.5j * col[1:]
                e[N - n[1:]] += 0.5j * col[1:]
            if m == 0:
                F[:, M] += e
            elif phi_sign == "cos":
                F[:, M + m] += 0.5 * e
                F[:, M - m] += 0.5 * e
            else:
                F[:, M + m] += -0.5j * e
                F[:, M - m] += 0.5j * e
    return ComplexCoeffs(N, M, F)


# ---------------------------------------------------------------------------
# zonal filter


def zonal_filter(pr: PRCoeffs, grid: Grid, M0: int | None = 20) -> PRCoeffs:
    """Latitude-dependent zonal truncation: on each colatitude ring zero all
    zonal wavenumbers above ``min(M, M0 + M sin(theta))``, then re-project."""
    if M0 is None:
        return pr
    if M0 < 0:
        raise ValueError("M0 must be non-negative")
    M = pr.M
    cutoff = np.minimum(M, M0 + M * np.sin(grid.colatitudes))  # (N_lat,)
    if np.all(cutoff >= M):
        return pr

    values = synthesize_std(pr_to_std(pr), grid)
    fhat = scipy.fft.rfft(values.values, axis=1)
    m = np.arange(fhat.shape[1])
    fhat[m[None, :] > cutoff[:, None]] = 0.0
    filtered = GridField(grid, pr.parity, scipy.fft.irfft(fhat, n=grid.m_lon, axis=1))
    return project_pr(analyze_std(filtered, M, pr.N))


# ---------------------------------------------------------------------------
# conveniences


def analyze_pr(field: GridField, M: int, N: int) -> PRCoeffs:
    return project_pr(analyze_std(field, M, N))


def synthesize_pr(pr: PRCoeffs, grid: Grid) -> GridField:
    return synthesize_std(pr_to_std(pr), grid)
