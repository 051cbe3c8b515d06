"""Physical constants for the rotating shallow-water system."""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class PhysicalConstants:
    """Sphere radius ``a`` (m), rotation rate ``Omega`` (1/s), gravity ``g`` (m/s^2)."""

    a: float
    Omega: float
    g: float

    def __post_init__(self):
        if not (self.a > 0 and self.Omega > 0 and self.g > 0):
            raise ValueError("all physical constants must be positive")


# Standard values used throughout the Williamson et al. (1992) test suite.
EARTH = PhysicalConstants(a=6.37122e6, Omega=7.292e-5, g=9.80616)
