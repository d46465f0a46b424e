"""Low-level numerics: normal CDF and quantile, Cholesky with pivot reporting."""

from __future__ import annotations

import numpy as np
from scipy.special import ndtr

from .errors import DimensionError, MatrixError, ParameterError

#: Diagonal slack tolerated when factorizing semi-definite matrices.
CHOLESKY_SHIFT = 1e-10


def normal_cdf(x):
    """Standard normal CDF, elementwise on arrays, accurate to ~1e-16."""
    return ndtr(x)


def normal_quantile(u, tol: float = 1e-9):
    """Inverse standard normal CDF by bisection on :func:`normal_cdf`.

    Bisection keeps the quantile consistent with the CDF used everywhere
    else in the package. Inputs must lie strictly inside (0, 1); the
    bracket [-10, 10] covers every probability representable that far
    from the tails.
    """
    arr = np.asarray(u, dtype=float)
    if arr.size == 0:
        raise ParameterError("normal_quantile needs at least one probability")
    if np.any((arr <= 0.0) | (arr >= 1.0)):
        raise ParameterError("normal_quantile is defined on the open interval (0, 1)")
    lo = np.full(arr.shape, -10.0)
    hi = np.full(arr.shape, 10.0)
    while float(np.max(hi - lo)) > tol:
        mid = 0.5 * (lo + hi)
        below = normal_cdf(mid) < arr
        lo = np.where(below, mid, lo)
        hi = np.where(below, hi, mid)
    out = 0.5 * (lo + hi)
    return out if isinstance(u, np.ndarray) else float(out)


def cholesky_lower(matrix, shift_tol: float = CHOLESKY_SHIFT) -> np.ndarray:
    """Lower-triangular L with L @ L.T equal to the input matrix.

    Pivots within ``shift_tol`` of zero are lifted to ``shift_tol`` so
    that positive semi-definite inputs factor; a pivot below
    ``-shift_tol`` raises :class:`MatrixError` carrying the pivot index.
    """
    a = np.asarray(matrix, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionError(f"expected a square matrix, got shape {a.shape}")
    n = a.shape[0]
    lower = np.zeros((n, n))
    for j in range(n):
        pivot = a[j, j] - lower[j, :j] @ lower[j, :j]
        if pivot < -shift_tol:
            raise MatrixError(
                f"matrix is not positive semi-definite: pivot {j} = {pivot:.6e}",
                pivot=j,
            )
        lower[j, j] = np.sqrt(max(pivot, shift_tol))
        if j + 1 < n:
            lower[j + 1 :, j] = (a[j + 1 :, j] - lower[j + 1 :, :j] @ lower[j, :j]) / lower[j, j]
    return lower


def validate_correlation_matrix(matrix, d: int | None = None) -> np.ndarray:
    """Check symmetry, unit diagonal, off-diagonal range, and PSD-ness.

    Returns the validated matrix as a float array. ``d``, when given,
    additionally pins the expected size.
    """
    r = np.asarray(matrix, dtype=float)
    if r.ndim != 2 or r.shape[0] != r.shape[1]:
        raise DimensionError(f"correlation matrix must be square, got shape {r.shape}")
    if d is not None and r.shape[0] != d:
        raise DimensionError(
            f"correlation matrix is {r.shape[0]}x{r.shape[0]}, expected {d}x{d}"
        )
    if not np.array_equal(r, r.T):
        raise MatrixError("correlation matrix is not symmetric")
    if np.any(np.diag(r) != 1.0):
        bad = int(np.argmax(np.diag(r) != 1.0))
        raise MatrixError(f"correlation matrix diagonal entry {bad} is not 1")
    off = r[~np.eye(r.shape[0], dtype=bool)]
    if off.size and (off.min() < -1.0 or off.max() > 1.0):
        raise MatrixError("correlation matrix has an off-diagonal entry outside [-1, 1]")
    cholesky_lower(r)  # raises MatrixError with pivot index if indefinite
    return r


def nearest_correlation_matrix(matrix, eig_floor: float = 1e-8) -> np.ndarray:
    """Project a near-correlation matrix to the closest valid one.

    Symmetrizes, clips eigenvalues at ``eig_floor``, and renormalizes the
    diagonal back to 1. Used to clean empirical estimates whose sampling
    noise makes them slightly indefinite.
    """
    c = np.asarray(matrix, dtype=float)
    c = 0.5 * (c + c.T)
    eigvals, eigvecs = np.linalg.eigh(c)
    eigvals = np.clip(eigvals, eig_floor, None)
    rebuilt = (eigvecs * eigvals) @ eigvecs.T
    scale = 1.0 / np.sqrt(np.diag(rebuilt))
    out = rebuilt * np.outer(scale, scale)
    out = 0.5 * (out + out.T)
    np.fill_diagonal(out, 1.0)
    return np.clip(out, -1.0, 1.0)
