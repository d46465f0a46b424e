"""Descriptive statistics and parametric fitting for evaluation profiles.

Histograms keep the exact-0 and exact-1 grade counts separate from the
interior bins because clipped and normalized models place real point
masses at the endpoints; pooling them into the edge bins would hide the
feature that distinguishes those models.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionError, FitError, ParameterError
from .numerics import nearest_correlation_matrix, normal_quantile
from .profiles import EvaluationProfile

_BETA_PARAM_FLOOR = 1e-3


@dataclass(frozen=True)
class HistogramData:
    """Interior bin counts on (0, 1) plus endpoint atom counts for one candidate."""

    candidate: int
    bin_edges: tuple[float, ...]
    bin_counts: tuple[int, ...]
    zero_count: int
    one_count: int

    @property
    def total(self) -> int:
        return self.zero_count + self.one_count + sum(self.bin_counts)

    def to_json_dict(self) -> dict:
        return {
            "candidate": self.candidate + 1,
            "bin_edges": list(self.bin_edges),
            "bin_counts": list(self.bin_counts),
            "zero_count": self.zero_count,
            "one_count": self.one_count,
        }


def histogram(profile: EvaluationProfile, candidate: int, bins: int = 20) -> HistogramData:
    """Histogram of one candidate's grades with explicit endpoint atoms.

    Grades strictly inside (0, 1) fall into ``bins`` equal-width bins;
    exact 0s and exact 1s are counted separately. Counts always sum to n.
    """
    if bins < 1:
        raise ParameterError(f"need at least one bin, got {bins}")
    grades = profile.column(candidate)
    zero_count = int(np.sum(grades == 0.0))
    one_count = int(np.sum(grades == 1.0))
    interior = grades[(grades != 0.0) & (grades != 1.0)]
    counts, edges = np.histogram(interior, bins=bins, range=(0.0, 1.0))
    return HistogramData(
        candidate=candidate,
        bin_edges=tuple(float(e) for e in edges),
        bin_counts=tuple(int(c) for c in counts),
        zero_count=zero_count,
        one_count=one_count,
    )


def pairwise_scatter(profile: EvaluationProfile, i: int, j: int) -> np.ndarray:
    """The n (grade of i, grade of j) pairs in voter order, one voter per row."""
    if i == j:
        raise IndexError("scatter needs two distinct candidates")
    return np.column_stack([profile.column(i), profile.column(j)])


@dataclass(frozen=True, eq=False)
class CorrelationReport:
    """Pearson correlations of candidate columns; zero-variance columns are flagged.

    Rows and columns of undefined candidates hold NaN rather than a
    silent 0, and their indices are listed in ``undefined``.
    """

    matrix: np.ndarray
    undefined: tuple[int, ...] = ()

    def to_json_dict(self) -> dict:
        cleaned = [
            [None if np.isnan(x) else float(x) for x in row] for row in self.matrix
        ]
        return {
            "correlation": cleaned,
            "undefined_candidates": [i + 1 for i in self.undefined],
        }


def empirical_correlation(profile: EvaluationProfile) -> CorrelationReport:
    """Pearson correlation matrix of the candidate grade columns."""
    if profile.n < 2:
        raise DimensionError("correlation needs at least 2 voters")
    values = profile.values
    centered = values - values.mean(axis=0)
    spread = np.sqrt((centered**2).sum(axis=0))
    undefined = tuple(int(i) for i in np.flatnonzero(spread == 0.0))
    safe = np.where(spread == 0.0, 1.0, spread)
    matrix = (centered / safe).T @ (centered / safe)
    matrix = np.clip(0.5 * (matrix + matrix.T), -1.0, 1.0)
    np.fill_diagonal(matrix, 1.0)
    for i in undefined:
        matrix[i, :] = np.nan
        matrix[:, i] = np.nan
    return CorrelationReport(matrix, undefined)


def fit_beta_moments(samples) -> tuple[float, float]:
    """Method-of-moments Beta fit from samples in [0, 1].

    With sample mean m and variance v: alpha = m * (m(1-m)/v - 1) and
    beta = (1-m) * (m(1-m)/v - 1), both clamped below at 1e-3 so a noisy
    sample never yields a non-positive shape.
    """
    arr = np.asarray(samples, dtype=float)
    if arr.ndim != 1:
        arr = arr.ravel()
    if arr.size < 10:
        raise FitError(f"Beta fit needs at least 10 samples, got {arr.size}")
    if np.any((arr < 0.0) | (arr > 1.0)):
        raise FitError("Beta fit samples must lie in [0, 1]")
    m = float(arr.mean())
    v = float(arr.var(ddof=1))
    if v <= 0.0:
        raise FitError("Beta fit is undefined for a zero-variance sample")
    if not 0.0 < m < 1.0:
        raise FitError(f"Beta fit needs a mean strictly inside (0, 1), got {m}")
    shape_sum = m * (1.0 - m) / v - 1.0
    alpha = max(m * shape_sum, _BETA_PARAM_FLOOR)
    beta = max((1.0 - m) * shape_sum, _BETA_PARAM_FLOOR)
    return alpha, beta


def fit_gaussian_copula(profile: EvaluationProfile) -> np.ndarray:
    """Estimate the Gaussian-copula correlation matrix from a profile.

    Each column is rank-transformed to midpoint probabilities
    (rank - 0.5)/n (ties get their average rank), mapped through the
    inverse normal CDF, and the Pearson correlations of the resulting
    scores are projected to the nearest valid correlation matrix.
    """
    if profile.n < 10:
        raise FitError(f"copula fit needs at least 10 voters, got {profile.n}")
    n, d = profile.n, profile.d
    scores = np.empty((n, d))
    for i in range(d):
        col = profile.values[:, i]
        if np.all(col == col[0]):
            raise FitError(f"copula fit is undefined: candidate column {i} is constant")
        scores[:, i] = normal_quantile((_average_ranks(col) - 0.5) / n)
    raw = np.corrcoef(scores, rowvar=False)
    if d == 1:
        raw = np.array([[1.0]])
    return nearest_correlation_matrix(raw)


def _average_ranks(x: np.ndarray) -> np.ndarray:
    """1-based ranks with ties sharing their average rank."""
    _, inverse, counts = np.unique(x, return_inverse=True, return_counts=True)
    ends = np.cumsum(counts)
    average = ends - (counts - 1) / 2.0
    return average[inverse]


def ks_uniform_statistic(samples) -> float:
    """Sup distance between the empirical CDF of samples and Uniform[0, 1]."""
    arr = np.sort(np.asarray(samples, dtype=float).ravel())
    if arr.size == 0:
        raise ParameterError("KS statistic needs at least one sample")
    if arr[0] < 0.0 or arr[-1] > 1.0:
        raise ParameterError("KS statistic expects samples in [0, 1]")
    n = arr.size
    positions = np.arange(1, n + 1)
    d_plus = np.max(positions / n - arr)
    d_minus = np.max(arr - (positions - 1) / n)
    return float(max(d_plus, d_minus))


def ks_uniform_critical(n: int, level: float = 0.01) -> float:
    """Asymptotic KS critical value; 1.63/sqrt(n) at the 1% level."""
    coefficients = {0.01: 1.63, 0.05: 1.36, 0.10: 1.22}
    if level not in coefficients:
        raise ParameterError(f"no tabulated KS coefficient for level {level}")
    return coefficients[level] / np.sqrt(n)
