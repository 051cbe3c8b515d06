"""Gridded fields and their pole parity.

A scalar on the sphere, sampled on a latitude-longitude grid and continued
through the poles by the glide reflection ``(theta, phi) -> (-theta, phi+pi)``,
is even in colatitude for even zonal wavenumbers and odd for odd ones.  The
components of a tangent vector field pick up an extra sign when carried over
a pole, which swaps those parity roles.  Every transform in this package
branches on that tag, so grid fields carry it explicitly.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .grid import Grid


class FieldParity(enum.Enum):
    SCALAR = "scalar"
    VECTOR = "vector"


@dataclass
class GridField:
    grid: Grid
    parity: FieldParity
    values: np.ndarray  # (N_lat, M_lon)

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        if self.values.shape != self.grid.shape:
            raise ValueError(
                f"values shape {self.values.shape} does not match grid {self.grid.shape}"
            )

    def check_finite(self, what: str = "field") -> None:
        if not np.all(np.isfinite(self.values)):
            raise FloatingPointError(f"{what} contains non-finite values")

    def copy(self) -> "GridField":
        return GridField(self.grid, self.parity, self.values.copy())


def scalar_field(grid: Grid, values: np.ndarray) -> GridField:
    return GridField(grid, FieldParity.SCALAR, values)


def vector_field(grid: Grid, values: np.ndarray) -> GridField:
    return GridField(grid, FieldParity.VECTOR, values)


def constant_field(grid: Grid, value: float, parity: FieldParity = FieldParity.SCALAR) -> GridField:
    return GridField(grid, parity, np.full(grid.shape, float(value)))
