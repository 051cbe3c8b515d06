"""Shallow-water equations on the sphere with a semi-implicit semi-Lagrangian
scheme, double-Fourier spectral discretization, and spectrally accurate
departure-point interpolation."""

import warnings

# numba's TBB probe warns on this image's older TBB; the workqueue layer it
# falls back to is fine for our gather-only kernels
warnings.filterwarnings(
    "ignore", message=".*TBB threading layer.*", category=Warning
)

from .constants import EARTH, PhysicalConstants
from .fields import FieldParity, GridField, constant_field, scalar_field, vector_field
from .grid import Grid, GridKind, build_grid, legendre_nodes

__all__ = [
    "EARTH",
    "PhysicalConstants",
    "FieldParity",
    "GridField",
    "Grid",
    "GridKind",
    "build_grid",
    "legendre_nodes",
    "constant_field",
    "scalar_field",
    "vector_field",
]

__version__ = "0.1.0"
