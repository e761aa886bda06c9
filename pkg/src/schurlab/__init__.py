"""Schur stability certificates and randomized tests of stability-preserving linear maps."""

from .config import DEFAULT, Tolerances
from .linalg import Spectrum, eigenvalues, operator_norm, spectral_radius
from .matmap import MatrixMap, build
from .stability import StabilityReport, is_schur_stable

__version__ = "0.1.0"

__all__ = [
    "DEFAULT",
    "MatrixMap",
    "Spectrum",
    "StabilityReport",
    "Tolerances",
    "build",
    "eigenvalues",
    "is_schur_stable",
    "operator_norm",
    "spectral_radius",
]
