"""Banded operations on colatitude trigonometric series.

A "cos series" holds coefficients ``a[n]`` of ``cos(n*theta)`` for
``n = 0..len-1``; a "sin series" holds coefficients ``b[n]`` of
``sin(n*theta)`` with slot 0 structurally zero.  All operations act along
axis 0 and broadcast over trailing axes, so a whole block of zonal
wavenumbers can be processed in one call.

Products with sin/cos couple ``n`` to ``n +/- 1`` and are exact (output one
slot longer).  Division by ``sin(theta)`` inverts the corresponding banded
map by a stable two-stride recurrence (partial sums of the input, no error
growth); when the input is not exactly divisible the mismatch lands in the
highest retained harmonics.
"""

from __future__ import annotations

import numpy as np


def _out(x: np.ndarray, n: int) -> np.ndarray:
    return np.zeros((n,) + x.shape[1:], dtype=x.dtype)


def pad_to(x: np.ndarray, n: int) -> np.ndarray:
    if x.shape[0] >= n:
        return x[:n]
    y = _out(x, n)
    y[: x.shape[0]] = x
    return y


def diff_cos(a: np.ndarray) -> np.ndarray:
    """d/dtheta of a cos series -> sin series (same length)."""
    n = np.arange(a.shape[0]).reshape((-1,) + (1,) * (a.ndim - 1))
    return -n * a


def diff_sin(b: np.ndarray) -> np.ndarray:
    """d/dtheta of a sin series -> cos series (same length)."""
    n = np.arange(b.shape[0]).reshape((-1,) + (1,) * (b.ndim - 1))
    return n * b


def mul_sin_cos(a: np.ndarray) -> np.ndarray:
    """sin(theta) * cos series -> sin series, one slot longer."""
    k = a.shape[0]
    s = _out(a, k + 1)
    # sin t * cos(n t) = (sin((n+1)t) - sin((n-1)t)) / 2, with sin(-t) folding at n=0
    s[1:] += 0.5 * a
    s[1] += 0.5 * a[0]
    s[1 : k - 1] -= 0.5 * a[2:]
    return s


def mul_sin_sin(b: np.ndarray) -> np.ndarray:
    """sin(theta) * sin series -> cos series, one slot longer."""
    k = b.shape[0]
    c = _out(b, k + 1)
    # sin t * sin(n t) = (cos((n-1)t) - cos((n+1)t)) / 2
    c[: k - 1] += 0.5 * b[1:]
    c[2:] -= 0.5 * b[1:]
    return c


def mul_cos_cos(a: np.ndarray) -> np.ndarray:
    """cos(theta) * cos series -> cos series, one slot longer."""
    k = a.shape[0]
    c = _out(a, k + 1)
    c[1:] += 0.5 * a
    c[1] += 0.5 * a[0]
    c[: k - 1] += 0.5 * a[1:]
    return c


def mul_cos_sin(b: np.ndarray) -> np.ndarray:
    """cos(theta) * sin series -> sin series, one slot longer."""
    k = b.shape[0]
    s = _out(b, k + 1)
    s[2:] += 0.5 * b[1:]
    s[1 : k - 1] += 0.5 * b[2:]
    return s


def div_sin_from_sin(g: np.ndarray) -> np.ndarray:
    """Solve ``sin(theta) * (cos series d) = sin series g`` for d.

    Exact inversion (the system is square); length shrinks by one.
    """
    kmax = g.shape[0] - 1  # highest sin harmonic
    d = _out(g, max(kmax, 1))
    if kmax < 1:
        return d
    # Relations: g_k = d_{k-1}/2 * (1 + [k==1]) - d_{k+1}/2, so for j >= 1
    # d_j = 2 * (g_{j+1} + g_{j+3} + ...), and d_0 = g_1 + d_2/2.
    for s0 in (kmax, kmax - 1):
        src = np.arange(s0, 1, -2)  # descending sources s >= 2, targets s-1
        if src.size:
            d[src - 1] = 2.0 * np.cumsum(g[src], axis=0)
    d[0] = g[1] + (0.5 * d[2] if kmax >= 3 else 0.0)
    return d


def div_sin_from_cos(g: np.ndarray) -> np.ndarray:
    """Solve ``sin(theta) * (sin series d) = cos series g`` for d.

    Uses the relations at harmonics 0..K-2; any inconsistency of g (a field
    violating the pole conditions) is absorbed by the two highest relations,
    which are dropped.  Length shrinks by one.
    """
    kmax = g.shape[0] - 1
    d = _out(g, max(kmax, 1))
    if kmax < 1:
        return d
    # Relations: g_0 = d_1/2, g_k = (d_{k+1} - d_{k-1})/2, so for j >= 1
    # d_j = 2 * (g_{j-1} + g_{j-3} + ... down to g_0 or g_1).
    for p in (0, 1):
        src = np.arange(p, kmax - 1, 2)  # ascending sources <= K-2, targets s+1
        if src.size:
            d[src + 1] = 2.0 * np.cumsum(g[src], axis=0)
    return d
