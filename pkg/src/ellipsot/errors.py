"""Exception hierarchy.

Split by CLI exit code: bad user input (1), unsupported distribution
pairs (2), numerical failures (3).
"""


class EllipsotError(Exception):
    """Base class for all package errors."""


class SpecError(EllipsotError, ValueError):
    """Malformed job/distribution spec or invalid argument (exit code 1)."""


class UnsupportedPairError(EllipsotError):
    """No closed form exists for this pair of distributions (exit code 2)."""


class NumericalError(EllipsotError):
    """Numerical failure: singularity, invalid matrix, infinite moment (exit code 3)."""


class NotSymmetricError(NumericalError):
    """Matrix asymmetry beyond tolerance."""


class NotPositiveDefiniteError(NumericalError):
    """Eigenvalue negative beyond tolerance."""


class SingularMatrixError(NumericalError):
    """Eigenvalue below the rank tolerance where full rank is required."""


class InfiniteMomentError(NumericalError):
    """Radial law lacks the required finite moment."""
