"""Evaluation profiles: the n-voters-by-d-candidates matrix of grades.

A profile stores one real grade in [0, 1] per (voter, candidate) pair.
Rows are voters, columns are candidates. Profiles are immutable after
construction; discrete grade scales are a validation concern, not a
separate storage type, so every rule runs on the same float matrix.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionError, ParameterError


@dataclass(frozen=True)
class GradeScale:
    """Grade scale of a profile: continuous on [0, 1], or k evenly spaced levels.

    ``levels=None`` means continuous. A discrete scale with k levels uses
    the lattice {0, 1/(k-1), ..., 1}.
    """

    levels: int | None = None

    def __post_init__(self):
        if self.levels is not None and int(self.levels) < 2:
            raise ParameterError(
                f"a discrete scale needs at least 2 levels, got {self.levels}"
            )

    @property
    def is_discrete(self) -> bool:
        return self.levels is not None

    def lattice(self) -> np.ndarray:
        """The admissible grade values of a discrete scale."""
        if self.levels is None:
            raise ParameterError("a continuous scale has no lattice")
        return np.linspace(0.0, 1.0, self.levels)


CONTINUOUS = GradeScale()


@dataclass(frozen=True, eq=False)
class EvaluationProfile:
    """Immutable matrix of evaluations; entry [j, i] is voter j's grade of candidate i."""

    values: np.ndarray
    scale: GradeScale = CONTINUOUS

    def __post_init__(self):
        arr = np.array(self.values, dtype=float)
        if arr.ndim != 2:
            raise DimensionError(
                f"profile values must be a 2-d matrix, got ndim={arr.ndim}"
            )
        if arr.shape[0] < 1 or arr.shape[1] < 1:
            raise DimensionError(
                f"profile needs at least one voter and one candidate, got shape {arr.shape}"
            )
        arr.setflags(write=False)
        object.__setattr__(self, "values", arr)

    @property
    def n(self) -> int:
        """Number of voters (rows)."""
        return self.values.shape[0]

    @property
    def d(self) -> int:
        """Number of candidates (columns)."""
        return self.values.shape[1]

    def column(self, candidate: int) -> np.ndarray:
        """All grades received by one candidate (0-based index)."""
        if not 0 <= candidate < self.d:
            raise IndexError(
                f"candidate index {candidate} out of range for {self.d} candidates"
            )
        return self.values[:, candidate]


def new_profile(n: int, d: int, scale: GradeScale = CONTINUOUS) -> EvaluationProfile:
    """Create an all-zero profile with ``n`` voters and ``d`` candidates."""
    if n < 1 or d < 1:
        raise DimensionError(f"profile dimensions must be positive, got n={n}, d={d}")
    return EvaluationProfile(np.zeros((n, d)), scale)


def quantize(profile: EvaluationProfile, k: int) -> EvaluationProfile:
    """Snap a continuous profile onto the k-level lattice {0, 1/(k-1), ..., 1}.

    Each entry maps to round(e * (k-1)) / (k-1), rounding halves up, so
    0.05 on an 11-level scale becomes 0.1 rather than 0.0.
    """
    if k < 2:
        raise ParameterError(f"quantization needs at least 2 levels, got k={k}")
    if profile.scale.is_discrete:
        raise ParameterError("quantize expects a continuous input profile")
    steps = np.floor(profile.values * (k - 1) + 0.5)
    return EvaluationProfile(steps / (k - 1), GradeScale(k))


@dataclass(frozen=True)
class ValidationIssue:
    """One offending entry: 0-based voter row, candidate column, its value."""

    voter: int
    candidate: int
    value: float
    kind: str  # "range" or "lattice"


@dataclass(frozen=True)
class ValidationReport:
    issues: tuple[ValidationIssue, ...] = field(default=())

    @property
    def ok(self) -> bool:
        return not self.issues

    def __len__(self) -> int:
        return len(self.issues)


def validate(profile: EvaluationProfile) -> ValidationReport:
    """Report every out-of-range entry, and every off-lattice entry on discrete scales.

    An empty report means the profile satisfies its declared invariants.
    """
    v = profile.values
    in_range = (v >= 0.0) & (v <= 1.0)  # NaN compares false, so it is flagged
    issues = [
        ValidationIssue(int(j), int(i), float(v[j, i]), "range")
        for j, i in np.argwhere(~in_range)
    ]
    if profile.scale.is_discrete:
        k = profile.scale.levels
        nearest = np.round(v * (k - 1)) / (k - 1)
        off_lattice = in_range & (v != nearest)
        issues.extend(
            ValidationIssue(int(j), int(i), float(v[j, i]), "lattice")
            for j, i in np.argwhere(off_lattice)
        )
    issues.sort(key=lambda item: (item.voter, item.candidate))
    return ValidationReport(tuple(issues))
