"""Exception types shared across the package.

The CLI maps these onto stable exit codes, so library code should raise
the most specific class that applies.
"""


class EvalvoteError(Exception):
    """Base class for every error raised by this package."""


class DimensionError(EvalvoteError):
    """Profile, point, or matrix dimensions are invalid or inconsistent."""


class ParameterError(EvalvoteError):
    """A model, rule, or scale parameter is outside its legal range."""


class MatrixError(EvalvoteError):
    """A correlation matrix is unusable (asymmetric, bad diagonal, not PSD).

    ``pivot`` carries the index of the failing Cholesky pivot when the
    failure was detected during factorization.
    """

    def __init__(self, message: str, pivot: int | None = None):
        super().__init__(message)
        self.pivot = pivot


class DataError(EvalvoteError):
    """An input file is malformed, out of range, or incomplete."""


class FitError(EvalvoteError):
    """A parameter fit is undefined for the given sample."""
