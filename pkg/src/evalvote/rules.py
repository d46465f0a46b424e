"""Evaluation-based election rules and pairwise-majority analysis.

Four single-winner rules operate directly on grade matrices: approval
(count of grades at or above a threshold), range voting (highest mean),
majority judgement (highest lower median, iterated-removal tie-break),
and deepest voting (the grade vector of the most central point of the
voter cloud under a weighted-Lp depth). Rankings extracted from grades
feed the Condorcet winner/loser computations.

Candidate indices are 0-based throughout; JSON serialization shifts them
to 1-based.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DimensionError, ParameterError
from .profiles import EvaluationProfile

_GOLDEN_TOL = 1e-9
_INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0
_MAX_TRACE_ROUNDS = 32


@dataclass(frozen=True)
class TieBreak:
    """How a winner was singled out of a tied top set.

    ``tied`` holds the candidates tied before breaking; ``trace`` is a
    human-readable record of the steps taken (iterated median removals
    for majority judgement, then lowest-index as the final fallback).
    """

    tied: tuple[int, ...]
    method: str  # "lowest_index" or "iterated_median"
    trace: tuple[str, ...] = ()

    def to_json_dict(self) -> dict:
        return {
            "tied": [i + 1 for i in self.tied],
            "method": self.method,
            "trace": list(self.trace),
        }


@dataclass(frozen=True)
class ElectionResult:
    """Winner plus the per-candidate aggregate scores a rule maximized."""

    rule: str
    winner: int
    scores: tuple[float, ...]
    tie: TieBreak | None = None

    def to_json_dict(self) -> dict:
        return {
            "rule": self.rule,
            "winner": self.winner + 1,
            "scores": list(self.scores),
            "tie": None if self.tie is None else self.tie.to_json_dict(),
        }


@dataclass(frozen=True)
class DepthSpec:
    """Exponent of the weighted-Lp depth; the weight is fixed to x -> x**p."""

    p: float = 2.0

    def __post_init__(self):
        if not self.p > 0:
            raise ParameterError(f"depth exponent must be positive, got p={self.p}")


def _argmax_result(rule: str, scores: np.ndarray, tie: TieBreak | None = None,
                   ) -> ElectionResult:
    """Build a result for the argmax of ``scores`` with lowest-index tie-break."""
    best = np.max(scores)
    tied = tuple(int(i) for i in np.flatnonzero(scores == best))
    if tie is None and len(tied) > 1:
        tie = TieBreak(tied, "lowest_index")
    return ElectionResult(rule, tied[0], tuple(float(s) for s in scores), tie)


def approval_winner(profile: EvaluationProfile, threshold: float = 0.5) -> ElectionResult:
    """Candidate approved (grade >= threshold) by the most voters."""
    if not 0.0 <= threshold <= 1.0:
        raise ParameterError(f"approval threshold must lie in [0, 1], got {threshold}")
    counts = (profile.values >= threshold).sum(axis=0).astype(float)
    return _argmax_result("approval", counts)


def range_winner(profile: EvaluationProfile) -> ElectionResult:
    """Candidate with the highest mean grade."""
    return _argmax_result("range", profile.values.mean(axis=0))


def lower_median(values: np.ndarray) -> float:
    """Element at 1-based position ceil(n/2) of the sorted values.

    For odd n this is the middle grade; for even n the lower of the two
    middlemost, which keeps the median inside the grade set.
    """
    arr = np.sort(np.asarray(values, dtype=float))
    return float(arr[(len(arr) + 1) // 2 - 1])


def majority_judgement_winner(profile: EvaluationProfile) -> ElectionResult:
    """Candidate with the highest lower-median grade.

    Ties are broken by iterated median removal: each tied candidate drops
    one copy of the shared median grade and the lower medians are
    compared again, until one candidate stands out or the grade lists are
    exhausted; a surviving tie goes to the lowest index.
    """
    medians = np.array([lower_median(profile.values[:, i]) for i in range(profile.d)])
    best = medians.max()
    tied = [int(i) for i in np.flatnonzero(medians == best)]
    if len(tied) == 1:
        return _argmax_result("majority_judgement", medians)

    remaining = {i: np.sort(profile.values[:, i]).tolist() for i in tied}
    active = list(tied)
    trace: list[str] = []
    rounds = 0
    while len(active) > 1 and len(remaining[active[0]]) > 0:
        # remaining lists stay sorted, so the lower median is a direct index
        current = {
            i: remaining[i][(len(remaining[i]) + 1) // 2 - 1] for i in active
        }
        top = max(current.values())
        active = [i for i in active if current[i] == top]
        if len(active) == 1:
            break
        for i in active:
            remaining[i].remove(current[i])
        rounds += 1
        if rounds <= _MAX_TRACE_ROUNDS:
            trace.append(
                f"round {rounds}: removed median {top:.6g}; still tied {tuple(active)}"
            )
    if len(active) > 1:
        trace.append(f"grades exhausted after {rounds} rounds; lowest index of {tuple(active)} wins")
    winner = min(active)
    tie = TieBreak(tuple(tied), "iterated_median", tuple(trace))
    return ElectionResult(
        "majority_judgement", winner, tuple(float(m) for m in medians), tie
    )


def wlp_depth(x, profile: EvaluationProfile, spec: DepthSpec) -> float:
    """Depth of a grade vector inside the voter cloud, in (0, 1].

    Computes 1 / (1 + mean over voters of sum_i |e_ij - x_i|**p): 1 when
    every voter row equals x, decaying toward 0 with distance from the
    cloud.
    """
    point = np.asarray(x, dtype=float)
    if point.shape != (profile.d,):
        raise DimensionError(
            f"point must have {profile.d} coordinates, got shape {point.shape}"
        )
    total = np.abs(profile.values - point) ** spec.p
    return float(1.0 / (1.0 + total.sum() / profile.n))


def _golden_section_min(column: np.ndarray, p: float) -> float:
    """Minimize sum_j |e_j - x|**p over x in [0, 1]; convex for p >= 1."""
    a, b = 0.0, 1.0
    c = b - _INV_PHI * (b - a)
    d_ = a + _INV_PHI * (b - a)
    fc = float(np.sum(np.abs(column - c) ** p))
    fd = float(np.sum(np.abs(column - d_) ** p))
    while b - a > _GOLDEN_TOL:
        if fc < fd:
            b, d_, fd = d_, c, fc
            c = b - _INV_PHI * (b - a)
            fc = float(np.sum(np.abs(column - c) ** p))
        else:
            a, c, fc = c, d_, fd
            d_ = a + _INV_PHI * (b - a)
            fd = float(np.sum(np.abs(column - d_) ** p))
    return 0.5 * (a + b)


def deepest_point(profile: EvaluationProfile, spec: DepthSpec) -> np.ndarray:
    """Grade vector maximizing the weighted-Lp depth over [0, 1]^d.

    The power-weight objective separates per candidate, so coordinate i
    independently minimizes sum_j |e_ij - x_i|**p: the lower median for
    p=1, the mean for p=2, golden-section search otherwise. Exponents
    below 1 make the coordinate objectives non-convex and are rejected.
    """
    if spec.p < 1.0:
        raise ParameterError(
            f"deepest voting supports p >= 1 (convex coordinates), got p={spec.p}"
        )
    if spec.p == 1.0:
        coords = [lower_median(profile.values[:, i]) for i in range(profile.d)]
    elif spec.p == 2.0:
        coords = profile.values.mean(axis=0)
    else:
        coords = [
            _golden_section_min(profile.values[:, i], spec.p) for i in range(profile.d)
        ]
    return np.asarray(coords, dtype=float)


def deepest_voting_winner(profile: EvaluationProfile, spec: DepthSpec) -> ElectionResult:
    """Candidate with the highest coordinate of the deepest grade vector."""
    point = deepest_point(profile, spec)
    return _argmax_result(f"deepest(p={spec.p:g})", point)


def profile_to_rankings(profile: EvaluationProfile) -> np.ndarray:
    """Per-voter weak orders as dense rank vectors (rank 1 = best grade).

    Equal grades share a rank and no artificial tie-break is introduced,
    so each row uses every rank from 1 to its number of distinct grades.
    """
    values = profile.values
    order = np.argsort(-values, axis=1, kind="stable")
    sorted_desc = np.take_along_axis(values, order, axis=1)
    starts_group = np.ones(values.shape, dtype=bool)
    starts_group[:, 1:] = sorted_desc[:, 1:] != sorted_desc[:, :-1]
    dense = np.cumsum(starts_group, axis=1)
    ranks = np.empty(values.shape, dtype=np.int64)
    np.put_along_axis(ranks, order, dense, axis=1)
    return ranks


def pairwise_majority_matrix(rankings: np.ndarray) -> np.ndarray:
    """Entry (i, i'): number of voters ranking candidate i strictly above i'."""
    r = np.asarray(rankings)
    if r.ndim != 2:
        raise DimensionError(f"rankings must be an (n, d) matrix, got shape {r.shape}")
    return (r[:, :, None] < r[:, None, :]).sum(axis=0)


def condorcet_winner(rankings: np.ndarray) -> int | None:
    """Candidate beating every other in strict pairwise majority, if any.

    A tied pairwise contest counts as a win for neither side.
    """
    wins = pairwise_majority_matrix(rankings)
    d = wins.shape[0]
    if d == 1:
        return 0
    beats = wins > wins.T
    for i in range(d):
        if all(beats[i, k] for k in range(d) if k != i):
            return i
    return None


def condorcet_loser(rankings: np.ndarray) -> int | None:
    """Candidate losing every strict pairwise majority contest, if any."""
    wins = pairwise_majority_matrix(rankings)
    d = wins.shape[0]
    if d == 1:
        return None
    loses = wins < wins.T
    for i in range(d):
        if all(loses[i, k] for k in range(d) if k != i):
            return i
    return None
