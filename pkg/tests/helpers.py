"""Shared test utilities: independent oracles for the spectral machinery."""

import numpy as np

from dfsswe.fields import FieldParity
from dfsswe.transforms import (
    PRCoeffs,
    StdCoeffs,
    pr_class,
    pr_class_range,
    std_basis_kind,
)


def pr_basis_matrix(cls: str, N: int, theta: np.ndarray) -> np.ndarray:
    """Columns = pole-regular basis functions of a class evaluated at theta."""
    lo, hi = pr_class_range(cls, N)
    ns = np.arange(lo, hi + 1)
    t = theta[:, None]
    if cls == "cos_full":
        return np.cos(t * ns)
    if cls == "sincos":
        return np.sin(t) * np.cos(t * ns)
    if cls == "sinsin":
        return np.sin(t) * np.sin(t * ns)
    if cls == "sin2sin":
        return np.sin(t) ** 2 * np.sin(t * ns)
    raise ValueError(cls)


def std_basis_matrix(kind: str, N: int, theta: np.ndarray) -> np.ndarray:
    ns = np.arange(N + 1)
    t = theta[:, None]
    return np.cos(t * ns) if kind == "cos" else np.sin(t * ns)


def eval_std_direct(std: StdCoeffs, theta: np.ndarray, phi: np.ndarray) -> np.ndarray:
    """Direct (slow) evaluation of a std series at a tensor grid of points."""
    out = np.zeros((theta.size, phi.size))
    for m in range(std.M + 1):
        E = std_basis_matrix(std_basis_kind(m, std.parity), std.N, theta)
        fm_c = E @ std.C[:, m]
        fm_s = E @ std.S[:, m]
        out += np.outer(fm_c, np.cos(m * phi)) + np.outer(fm_s, np.sin(m * phi))
    return out


def eval_pr_direct(pr: PRCoeffs, theta: np.ndarray, phi: np.ndarray) -> np.ndarray:
    """Direct evaluation of a pole-regular series at a tensor grid of points."""
    out = np.zeros((theta.size, phi.size))
    for m in range(pr.M + 1):
        cls = pr_class(m, pr.parity)
        lo, hi = pr_class_range(cls, pr.N)
        B = pr_basis_matrix(cls, pr.N, theta)
        fm_c = B @ pr.C[lo : hi + 1, m]
        fm_s = B @ pr.S[lo : hi + 1, m]
        out += np.outer(fm_c, np.cos(m * phi)) + np.outer(fm_s, np.sin(m * phi))
    return out


def random_std(rng, N: int, M: int, parity=FieldParity.SCALAR) -> StdCoeffs:
    """Random std coefficients respecting the structural zeros."""
    C = rng.standard_normal((N + 1, M + 1))
    S = rng.standard_normal((N + 1, M + 1))
    S[:, 0] = 0.0
    for m in range(M + 1):
        if std_basis_kind(m, parity) == "sin":
            C[0, m] = 0.0
            S[0, m] = 0.0
    return StdCoeffs(N, M, parity, C, S)


def random_pr(rng, N: int, M: int, parity=FieldParity.SCALAR) -> PRCoeffs:
    """Random pole-regular coefficients respecting the class ranges."""
    C = np.zeros((N + 1, M + 1))
    S = np.zeros((N + 1, M + 1))
    for m in range(M + 1):
        lo, hi = pr_class_range(pr_class(m, parity), N)
        C[lo : hi + 1, m] = rng.standard_normal(hi - lo + 1)
        if m > 0:
            S[lo : hi + 1, m] = rng.standard_normal(hi - lo + 1)
    return PRCoeffs(N, M, parity, C, S)


def dense_project_pr_oracle(std: StdCoeffs) -> PRCoeffs:
    """Least-squares projection assembled by high-order quadrature and solved
    densely; independent of the banded production path."""
    from dfsswe.grid import legendre_nodes

    z, w = legendre_nodes(800)
    theta = 0.5 * np.pi * (z + 1.0)
    wq = 0.5 * np.pi * w

    N, M = std.N, std.M
    C = np.zeros_like(std.C)
    S = np.zeros_like(std.S)
    for m in range(M + 1):
        cls = pr_class(m, std.parity)
        lo, hi = pr_class_range(cls, N)
        B = pr_basis_matrix(cls, N, theta)  # (q, k)
        E = std_basis_matrix(std_basis_kind(m, std.parity), N, theta)
        G = (B * wq[:, None]).T @ B
        C[lo : hi + 1, m] = np.linalg.solve(G, (B * wq[:, None]).T @ (E @ std.C[:, m]))
        if m > 0:
            S[lo : hi + 1, m] = np.linalg.solve(G, (B * wq[:, None]).T @ (E @ std.S[:, m]))
    return PRCoeffs(N, M, std.parity, C, S)
