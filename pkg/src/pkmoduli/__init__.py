"""Numerical checks for an SL(2, R)-invariant split-signature Kahler structure on H^2 x C."""

from .quartic import ModuliPoint
from .kahler import deformation, metric_matrix, symplectic_matrix

__all__ = ["ModuliPoint", "deformation", "metric_matrix", "symplectic_matrix"]
__version__ = "0.1.0"
