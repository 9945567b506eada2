"""Exception hierarchy shared by all factorization entry points."""


class AntitriError(Exception):
    """Base class for errors raised by :mod:`antitri`."""


class NotSkewSymmetricError(AntitriError, ValueError):
    """Input failed the skew-symmetry (or skew-Hermitian) check."""


class NotHermitianError(AntitriError, ValueError):
    """Input failed the Hermitian check."""


class StructureError(AntitriError, ValueError):
    """Input does not have the required zero pattern (e.g. antitriangular)."""


class DegenerateInputError(AntitriError, ValueError):
    """A transformation was requested from data that cannot define it."""


class DefiniteMatrixError(AntitriError, ValueError):
    """A skew-Hermitian matrix has all eigenvalues on one half of the imaginary axis.

    Such a matrix is unitarily similar only to ``a*i*I``-like forms and has no
    block antitriangular form with a nontrivial ``Y`` block.
    """


class ConvergenceError(AntitriError, RuntimeError):
    """An iterative kernel did not converge within its sweep budget."""
