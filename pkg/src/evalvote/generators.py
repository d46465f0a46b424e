"""Synthetic evaluation-profile generators.

Six models produce n-by-d grade matrices in [0, 1]:

* uniform iid grades (the evaluation analogue of impartial culture),
* a normalized variant that pins each voter's best grade to 1 and worst to 0,
* a Gaussian-copula model with dependent candidate grades and uniform margins,
* independent normals per candidate, clipped into [0, 1],
* independent Beta draws per candidate,
* a spatial model scoring candidates by proximity in a policy hypercube.

All generators are pure functions of their dimensions, parameters, and a
:class:`~evalvote.rng.SeededRandomSource`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Union

import numpy as np

from .errors import DimensionError, ParameterError
from .numerics import cholesky_lower, normal_cdf, validate_correlation_matrix
from .profiles import CONTINUOUS, EvaluationProfile
from .rng import RandomState, as_generator

DEFAULT_NORMAL_SIGMA = 0.25
DEFAULT_SIGMOID_STEEPNESS = 5.0
DEFAULT_SIGMOID_DISTANCE_SCALE = 2.0

# Exponent clamp that keeps np.exp finite in the sigmoid mapping.
_EXP_CLAMP = 700.0


def _check_dims(n: int, d: int) -> None:
    if n < 1 or d < 1:
        raise DimensionError(f"need at least one voter and one candidate, got n={n}, d={d}")


# ---------------------------------------------------------------------------
# Distance-to-score mappings for the spatial model


@dataclass(frozen=True)
class LinearMapping:
    """Score 1 - distance, floored at 0."""

    def __call__(self, dist: np.ndarray) -> np.ndarray:
        return np.maximum(0.0, 1.0 - np.asarray(dist, dtype=float))

    def to_json_dict(self) -> dict:
        return {"type": "linear"}


@dataclass(frozen=True)
class SigmoidMapping:
    """Logistic decay 1 / (1 + exp(steepness * (distance_scale * dist - 1))).

    ``steepness`` controls how sharp the drop is; ``distance_scale`` sets
    where it happens (the score crosses 0.5 at distance 1/distance_scale).
    """

    steepness: float = DEFAULT_SIGMOID_STEEPNESS
    distance_scale: float = DEFAULT_SIGMOID_DISTANCE_SCALE

    def __post_init__(self):
        if self.steepness <= 0 or self.distance_scale <= 0:
            raise ParameterError(
                "sigmoid mapping needs steepness > 0 and distance_scale > 0, "
                f"got {self.steepness}, {self.distance_scale}"
            )

    def __call__(self, dist: np.ndarray) -> np.ndarray:
        exponent = self.steepness * (self.distance_scale * np.asarray(dist, dtype=float) - 1.0)
        return 1.0 / (1.0 + np.exp(np.clip(exponent, -_EXP_CLAMP, _EXP_CLAMP)))

    def to_json_dict(self) -> dict:
        return {
            "type": "sigmoid",
            "lambda": self.steepness,
            "map_beta": self.distance_scale,
        }


DistanceMapping = Union[LinearMapping, SigmoidMapping]


@dataclass(frozen=True, eq=False)
class SpatialScene:
    """Voter and candidate coordinates in [0,1]^k plus the score mapping used."""

    voters: np.ndarray      # (n, k)
    candidates: np.ndarray  # (d, k)
    mapping: DistanceMapping

    @property
    def dim(self) -> int:
        return self.voters.shape[1]


# ---------------------------------------------------------------------------
# Model configurations (the tagged union consumed by the dispatcher and CLI)


@dataclass(frozen=True)
class UniformModel:
    """Independent uniform grades on [0, 1]."""


@dataclass(frozen=True)
class DirichletModel:
    """Per voter: grades {0, sorted uniforms, 1} assigned by a random permutation."""


@dataclass(frozen=True, eq=False)
class CopulaModel:
    """Gaussian copula over candidates; ``correlation=None`` samples a random matrix per call."""

    correlation: np.ndarray | None = None


@dataclass(frozen=True)
class NormalModel:
    """Per-candidate normals clipped into [0, 1]; ``means=None`` samples means uniformly per call."""

    means: tuple[float, ...] | None = None
    sigma: float = DEFAULT_NORMAL_SIGMA


@dataclass(frozen=True)
class BetaModel:
    """Per-candidate Beta draws; ``params=None`` samples (alpha, beta) pairs per call."""

    params: tuple[tuple[float, float], ...] | None = None


@dataclass(frozen=True)
class SpatialModel:
    """Proximity scores in a [0,1]^dim policy space; ``dim=None`` picks 2 below 5 candidates, else 3."""

    dim: int | None = None
    mapping: DistanceMapping = field(default_factory=LinearMapping)


GeneratorConfig = Union[
    UniformModel, DirichletModel, CopulaModel, NormalModel, BetaModel, SpatialModel
]

MODEL_NAMES = ("uniform", "dirichlet", "copula", "normal", "beta", "spatial")


# ---------------------------------------------------------------------------
# Generators


def gen_eic_uniform(n: int, d: int, rng: RandomState) -> EvaluationProfile:
    """Grades independent and uniform on [0, 1] for every voter and candidate."""
    _check_dims(n, d)
    g = as_generator(rng)
    return EvaluationProfile(g.random((n, d)), CONTINUOUS)


def gen_eic_dirichlet(n: int, d: int, rng: RandomState) -> EvaluationProfile:
    """Uniform-gap grades normalized per voter: every row contains an exact 0 and 1.

    Each voter's multiset of grades is {0, U_(1), ..., U_(d-2), 1} where
    the U_(i) are sorted iid uniforms; a fresh uniform permutation assigns
    the values to candidates. Equivalently, the row is the cumulative sum
    of a flat (d-1)-part Dirichlet prefixed with 0, shuffled.
    """
    if d < 2:
        raise ParameterError(
            f"normalized rows need a 0 and a 1, so at least 2 candidates; got d={d}"
        )
    _check_dims(n, d)
    g = as_generator(rng)
    interior = np.sort(g.random((n, d - 2)), axis=1)
    rows = np.hstack([np.zeros((n, 1)), interior, np.ones((n, 1))])
    return EvaluationProfile(g.permuted(rows, axis=1), CONTINUOUS)


def gen_eiac_copula(n: int, d: int, correlation, rng: RandomState) -> EvaluationProfile:
    """Gaussian-copula grades: dependent across candidates, uniform margins.

    Each voter row is Phi(z) for z drawn from a multivariate normal with
    the given correlation matrix, so every margin is uniform on [0, 1]
    while the matrix controls the dependence between candidate grades.
    """
    _check_dims(n, d)
    r = validate_correlation_matrix(correlation, d)
    lower = cholesky_lower(r)
    g = as_generator(rng)
    z = g.standard_normal((n, d)) @ lower.T
    return EvaluationProfile(normal_cdf(z), CONTINUOUS)


def random_correlation_matrix(d: int, rng: RandomState) -> np.ndarray:
    """Random valid correlation matrix via a normalized random Gram matrix.

    Draws a d-by-d standard-normal factor A and rescales A @ A.T to unit
    diagonal, which is positive semi-definite by construction.
    """
    if d < 1:
        raise DimensionError(f"need d >= 1, got d={d}")
    g = as_generator(rng)
    factor = g.standard_normal((d, d))
    gram = factor @ factor.T
    scale = 1.0 / np.sqrt(np.diag(gram))
    corr = gram * np.outer(scale, scale)
    corr = 0.5 * (corr + corr.T)
    np.fill_diagonal(corr, 1.0)
    return np.clip(corr, -1.0, 1.0)


def gen_eic_normal(
    n: int, d: int, means, sigma: float, rng: RandomState
) -> EvaluationProfile:
    """Per-candidate normal grades clipped into [0, 1].

    Grades for candidate i are N(means[i], sigma) with values below 0 cut
    to 0 and above 1 cut to 1, leaving point masses at both endpoints.
    """
    _check_dims(n, d)
    if sigma <= 0:
        raise ParameterError(f"sigma must be positive, got {sigma}")
    mu = np.asarray(means, dtype=float)
    if mu.shape != (d,):
        raise DimensionError(f"means must have length d={d}, got shape {mu.shape}")
    if np.any((mu < 0.0) | (mu > 1.0)):
        raise ParameterError("candidate means must lie in [0, 1]")
    g = as_generator(rng)
    raw = g.normal(loc=mu, scale=sigma, size=(n, d))
    return EvaluationProfile(np.clip(raw, 0.0, 1.0), CONTINUOUS)


def sample_candidate_means(d: int, rng: RandomState) -> np.ndarray:
    """One uniform mean on [0, 1] per candidate."""
    if d < 1:
        raise DimensionError(f"need d >= 1, got d={d}")
    return as_generator(rng).random(d)


def gen_eic_beta(n: int, d: int, params, rng: RandomState) -> EvaluationProfile:
    """Independent Beta(alpha_i, beta_i) grades per candidate."""
    _check_dims(n, d)
    pairs = np.asarray(params, dtype=float)
    if pairs.shape != (d, 2):
        raise DimensionError(
            f"params must be d={d} (alpha, beta) pairs, got shape {pairs.shape}"
        )
    if np.any(pairs <= 0.0):
        raise ParameterError("all Beta parameters must be positive")
    g = as_generator(rng)
    return EvaluationProfile(g.beta(pairs[:, 0], pairs[:, 1], size=(n, d)), CONTINUOUS)


def sample_beta_params(d: int, rng: RandomState) -> np.ndarray:
    """Random (alpha, beta) pair per candidate, as a (d, 2) array.

    Independently for each parameter: with probability 1/2 draw it
    uniformly from [0.5, 1], otherwise uniformly from [1, 5]. The four
    shape regimes (each parameter above or below 1) are equally likely.
    """
    if d < 1:
        raise DimensionError(f"need d >= 1, got d={d}")
    g = as_generator(rng)
    take_low = g.random((d, 2)) < 0.5
    low = g.uniform(0.5, 1.0, size=(d, 2))
    high = g.uniform(1.0, 5.0, size=(d, 2))
    return np.where(take_low, low, high)


def default_spatial_dim(d: int) -> int:
    """Policy-space dimension used when none is given: 2 below 5 candidates, else 3."""
    return 2 if d < 5 else 3


def gen_spatial(
    n: int, d: int, dim: int, mapping: DistanceMapping, rng: RandomState
) -> tuple[EvaluationProfile, SpatialScene]:
    """Proximity grades from uniform voter and candidate points in [0,1]^dim.

    The grade of candidate i by voter j is mapping(euclidean distance
    between their points). Returns the profile together with the scene so
    the geometry can be exported or replayed.
    """
    _check_dims(n, d)
    if dim < 1:
        raise ParameterError(f"spatial dimension must be at least 1, got {dim}")
    g = as_generator(rng)
    voters = g.random((n, dim))
    candidates = g.random((d, dim))
    dists = np.linalg.norm(voters[:, None, :] - candidates[None, :, :], axis=2)
    scene = SpatialScene(voters, candidates, mapping)
    return EvaluationProfile(mapping(dists), CONTINUOUS), scene


# ---------------------------------------------------------------------------
# Dispatch


@dataclass(frozen=True, eq=False)
class GenerationResult:
    """A generated profile plus the fully resolved configuration that produced it."""

    profile: EvaluationProfile
    resolved: dict
    scene: SpatialScene | None = None


def generate_profile(
    config: GeneratorConfig, n: int, d: int, rng: RandomState
) -> GenerationResult:
    """Generate a profile under any model configuration.

    Unset model parameters (normal means, Beta pairs, copula correlation,
    spatial dimension) are resolved here, drawing from the same stream
    that then generates the entries; the resolved values are echoed in
    the result so a run can be audited and reproduced.
    """
    g = as_generator(rng)
    if isinstance(config, UniformModel):
        return GenerationResult(gen_eic_uniform(n, d, g), {"model": "uniform"})
    if isinstance(config, DirichletModel):
        return GenerationResult(gen_eic_dirichlet(n, d, g), {"model": "dirichlet"})
    if isinstance(config, CopulaModel):
        corr = config.correlation
        if corr is None:
            corr = random_correlation_matrix(d, g)
        profile = gen_eiac_copula(n, d, corr, g)
        resolved = {"model": "copula", "correlation": np.asarray(corr).tolist()}
        return GenerationResult(profile, resolved)
    if isinstance(config, NormalModel):
        means = config.means
        if means is None:
            means = sample_candidate_means(d, g)
        profile = gen_eic_normal(n, d, means, config.sigma, g)
        resolved = {
            "model": "normal",
            "sigma": config.sigma,
            "means": np.asarray(means, dtype=float).tolist(),
        }
        return GenerationResult(profile, resolved)
    if isinstance(config, BetaModel):
        params = config.params
        if params is None:
            params = sample_beta_params(d, g)
        profile = gen_eic_beta(n, d, params, g)
        resolved = {
            "model": "beta",
            "params": np.asarray(params, dtype=float).tolist(),
        }
        return GenerationResult(profile, resolved)
    if isinstance(config, SpatialModel):
        dim = config.dim if config.dim is not None else default_spatial_dim(d)
        profile, scene = gen_spatial(n, d, dim, config.mapping, g)
        resolved = {
            "model": "spatial",
            "dim": dim,
            "mapping": config.mapping.to_json_dict(),
        }
        return GenerationResult(profile, resolved, scene)
    raise ParameterError(f"unknown generator configuration: {config!r}")
