"""Type-II nonuniform FFT: evaluate a 2-D uniform-frequency Fourier series at
scattered points.

The fast path follows the classic three-stage design (Barnett et al. 2019):
divide the coefficients by the Fourier transform of a compactly supported
spreading kernel (amplitude pre-correction), inverse-FFT onto a sigma-times
oversampled fine grid, then combine the ``w`` nearest fine-grid samples
around every target with kernel weights.  The kernel is the "exponential of
semicircle" ``exp(beta (sqrt(1 - x^2) - 1))`` on [-1, 1], whose transform is
computed once per plan by Gauss-Legendre quadrature.

``nudft2_direct`` is the exact O(N M K) double sum used as the accuracy
oracle throughout the test suite.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
import scipy.fft

from .transforms import ComplexCoeffs

try:
    import numba

    _HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a hard dependency in practice
    _HAVE_NUMBA = False


def _next_smooth(n: int) -> int:
    """Smallest 5-smooth integer >= n (keeps FFT cost predictable)."""
    if n <= 2:
        return 2
    best = None
    p5 = 1
    while p5 < 8 * n:
        p35 = p5
        while p35 < 8 * n:
            m = p35
            while m < n:
                m *= 2
            if best is None or m < best:
                best = m
            p35 *= 3
        p5 *= 5
    return best


def nudft2_direct(coeffs: ComplexCoeffs, theta: np.ndarray, phi: np.ndarray) -> np.ndarray:
    """Exact evaluation of ``sum_{n,m} F[n,m] e^(i n theta) e^(i m phi)``."""
    theta = np.atleast_1d(np.asarray(theta, dtype=float))
    phi = np.atleast_1d(np.asarray(phi, dtype=float))
    N, M = coeffs.N, coeffs.M
    ns = np.arange(-N, N + 1)
    ms = np.arange(-M, M + 1)
    # (K, 2N+1) @ (2N+1, 2M+1) -> (K, 2M+1), then row-wise dot with e^{im phi}
    et = np.exp(1j * theta[:, None] * ns)
    ep = np.exp(1j * phi[:, None] * ms)
    return np.einsum("kn,nm,km->k", et, coeffs.F, ep, optimize=True)


@dataclass
class NufftPlan:
    """Kernel/fine-grid parameters for repeated type-II transforms of one
    coefficient shape."""

    N: int
    M: int
    eps: float = 1e-12
    sigma: float = 2.0
    w: int = field(init=False)
    beta: float = field(init=False)
    n_fine: tuple[int, int] = field(init=False)

    def __post_init__(self):
        if not (1e-14 <= self.eps <= 1e-2):
            raise ValueError(f"eps={self.eps} outside supported range [1e-14, 1e-2]")
        self.w = max(2, int(np.ceil(np.log10(1.0 / self.eps))) + 1)
        self.beta = 2.30 * self.w
        self.n_fine = (
            _next_smooth(max(int(np.ceil(self.sigma * (2 * self.N + 1))), 2 * self.w + 2)),
            _next_smooth(max(int(np.ceil(self.sigma * (2 * self.M + 1))), 2 * self.w + 2)),
        )
        self._corr = (
            self._kernel_hat(self.n_fine[0], self.N),
            self._kernel_hat(self.n_fine[1], self.M),
        )

    def _kernel(self, s: np.ndarray) -> np.ndarray:
        """ES kernel on the fine grid, s in units of fine-grid spacing,
        support |s| <= w/2."""
        z = 2.0 * s / self.w
        out = np.zeros_like(z)
        inside = np.abs(z) <= 1.0
        out[inside] = np.exp(self.beta * (np.sqrt(1.0 - z[inside] ** 2) - 1.0))
        return out

    def _kernel_hat(self, n_fine: int, n_max: int) -> np.ndarray:
        """rho_n = int psi(s) e^{-i 2 pi n s / n_fine} ds for n = -n_max..n_max
        (even kernel -> cosine quadrature); s in fine-grid units."""
        from .grid import legendre_nodes

        q = max(64, 3 * self.w + 24)
        z, wq = legendre_nodes(q)
        s = 0.5 * self.w * z  # quadrature over [-w/2, w/2]
        ws = 0.5 * self.w * wq * self._kernel(s)
        n = np.arange(-n_max, n_max + 1)
        return (np.cos(np.outer(n, s) * (2.0 * np.pi / n_fine)) * ws).sum(axis=1)


def nufft2_type2(
    plan: NufftPlan,
    coeffs: ComplexCoeffs | np.ndarray,
    theta: np.ndarray,
    phi: np.ndarray,
    real: bool = False,
) -> np.ndarray:
    """Fast evaluation of one or more coefficient arrays at shared targets.

    ``coeffs`` may be a ``ComplexCoeffs`` (returns shape ``(K,)``) or a
    stacked array ``(B, 2N+1, 2M+1)`` (returns ``(B, K)``).  With
    ``real=True`` the coefficients are assumed Hermitian-symmetric (a real
    field) and the cheaper real transform path is used.
    """
    theta = np.atleast_1d(np.asarray(theta, dtype=float))
    phi = np.atleast_1d(np.asarray(phi, dtype=float))
    if not (np.all(np.isfinite(theta)) and np.all(np.isfinite(phi))):
        raise ValueError("targets must be finite")
    if theta.shape != phi.shape:
        raise ValueError("theta and phi must have the same shape")

    single = isinstance(coeffs, ComplexCoeffs)
    F = coeffs.F[None] if single else np.asarray(coeffs)
    if F.shape[1:] != (2 * plan.N + 1, 2 * plan.M + 1):
        raise ValueError("coefficient shape does not match plan")

    n1, n2 = plan.n_fine
    N, M = plan.N, plan.M
    B = F.shape[0]
    K = theta.size
    w = plan.w

    # amplitude pre-correction, zero-padded placement, inverse FFT to the
    # fine grid: g_j = sum_n (F_n / rho_n) e^{+2 pi i n j / n_fine}
    corr = np.outer(plan._corr[0], plan._corr[1])
    block = F / corr
    idx1 = np.arange(-N, N + 1) % n1
    if real:
        Gh = np.zeros((B, n1, n2 // 2 + 1), dtype=complex)
        Gh[:, idx1[:, None], np.arange(M + 1)[None, :]] = block[:, :, M:]
        g = scipy.fft.irfft2(Gh, s=(n1, n2), axes=(1, 2), norm="forward")
        chans = np.ascontiguousarray(g)
    else:
        G = np.zeros((B, n1, n2), dtype=complex)
        idx2 = np.arange(-M, M + 1) % n2
        G[:, idx1[:, None], idx2[None, :]] = block
        g = scipy.fft.ifft2(G, axes=(1, 2), norm="forward")
        chans = np.ascontiguousarray(
            np.concatenate([g.real, g.imag], axis=0)
        )  # (2B, n1, n2)

    t = np.mod(theta, 2.0 * np.pi) * (n1 / (2.0 * np.pi))
    p = np.mod(phi, 2.0 * np.pi) * (n2 / (2.0 * np.pi))
    i0 = np.ceil(t - 0.5 * w).astype(np.int64)  # leftmost node of the w-stencil
    j0 = np.ceil(p - 0.5 * w).astype(np.int64)

    if _HAVE_NUMBA:
        # pad columns so the innermost loop is contiguous; wrap rows by index
        padded = np.empty(chans.shape[:2] + (n2 + 2 * w,))
        padded[:, :, w : w + n2] = chans
        padded[:, :, :w] = chans[:, :, n2 - w :]
        padded[:, :, w + n2 :] = chans[:, :, :w]
        rows = (i0[:, None] + np.arange(w)[None, :]) % n1
        vals = np.empty((chans.shape[0], K))
        _interp_kernel(padded, rows, t, p, i0, j0, w, plan.beta, vals)
    else:
        off = np.arange(w)
        rows = (i0[:, None] + off[None, :]) % n1  # (K, w)
        cols = (j0[:, None] + off[None, :]) % n2
        wt_t = plan._kernel(i0[:, None] + off[None, :] - t[:, None])  # (K, w)
        wt_p = plan._kernel(j0[:, None] + off[None, :] - p[:, None])
        vals = np.zeros((chans.shape[0], K))
        chunk = max(1, 2_000_000 // (w * w))
        for s in range(0, K, chunk):
            e = min(K, s + chunk)
            sub = chans[:, rows[s:e, :, None], cols[s:e, None, :]]  # (C, k, w, w)
            wk = wt_t[s:e, :, None] * wt_p[s:e, None, :]  # (k, w, w)
            vals[:, s:e] = np.einsum("bkij,kij->bk", sub, wk)

    out = vals if real else vals[:B] + 1j * vals[B:]
    return out[0] if single else out


if _HAVE_NUMBA:

    @numba.njit(parallel=True, cache=True)
    def _interp_kernel(g, rows, t, p, i0, j0, w, beta, out):  # pragma: no cover - jitted
        C = g.shape[0]
        K = t.size
        for k in numba.prange(K):
            wt1 = np.empty(w)
            wt2 = np.empty(w)
            for a in range(w):
                z = 2.0 * (i0[k] + a - t[k]) / w
                wt1[a] = math.exp(beta * (math.sqrt(1.0 - z * z) - 1.0)) if abs(z) <= 1.0 else 0.0
                z = 2.0 * (j0[k] + a - p[k]) / w
                wt2[a] = math.exp(beta * (math.sqrt(1.0 - z * z) - 1.0)) if abs(z) <= 1.0 else 0.0
            cbase = j0[k] + w
            for b in range(C):
                acc = 0.0
                for a in range(w):
                    w1 = wt1[a]
                    if w1 == 0.0:
                        continue
                    r = rows[k, a]
                    s = 0.0
                    for c in range(w):
                        s += g[b, r, cbase + c] * wt2[c]
                    acc += s * w1
                out[b, k] = acc
