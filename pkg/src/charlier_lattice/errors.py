"""Exception types shared across the package."""


class SingularParameters(ValueError):
    """Raised when the explicit hypergeometric route hits a parameter
    singularity (a vanishing u-coefficient denominator or prefactor).
    The ladder route has no such restriction and should be used instead."""


class OutOfDomain(IndexError):
    """Raised when an unguarded shift tries to read below the lattice
    (a negative coordinate) or outside a finite backing window."""
