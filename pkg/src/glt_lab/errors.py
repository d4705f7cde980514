"""Exception hierarchy shared by all modules."""


class GLTLabError(Exception):
    """Base class for library errors."""


class InvalidInputError(GLTLabError, ValueError):
    """Input violates a structural precondition (shape, symmetry, ...)."""


class InvalidParameterError(GLTLabError, ValueError):
    """A scalar parameter is outside its admissible range."""


class DomainError(GLTLabError, ValueError):
    """A spectral function was applied outside its domain.

    Attributes
    ----------
    lambda_min : float
        Smallest eigenvalue of the offending matrix.
    """

    def __init__(self, message, lambda_min=None):
        super().__init__(message)
        self.lambda_min = lambda_min


class NotPositiveDefiniteError(GLTLabError, ValueError):
    """Matrix expected HPD is not.

    Attributes
    ----------
    index : int or None
        Failing pivot (1-based) when raised by a factorization.
    lambda_min : float or None
        Smallest eigenvalue when raised by an eigenvalue check.
    """

    def __init__(self, message, index=None, lambda_min=None):
        super().__init__(message)
        self.index = index
        self.lambda_min = lambda_min


class ConvergenceError(GLTLabError, RuntimeError):
    """An iteration failed to converge."""


class SizeError(GLTLabError, ValueError):
    """Requested problem size exceeds a hard guard."""
