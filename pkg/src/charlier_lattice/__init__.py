"""Bivariate Charlier polynomials and a discrete superintegrable
2D harmonic oscillator on the integer lattice."""

from .bivariate import (
    ModelParams,
    charlier2_explicit,
    charlier2_ladder,
    params_generic,
    weight,
)
from .errors import OutOfDomain, SingularParameters
from .univariate import charlier_orthonormal, charlier_standard, hermite

__all__ = [
    "ModelParams",
    "charlier2_ladder",
    "charlier2_explicit",
    "params_generic",
    "weight",
    "charlier_standard",
    "charlier_orthonormal",
    "hermite",
    "SingularParameters",
    "OutOfDomain",
]

__version__ = "0.1.0"
