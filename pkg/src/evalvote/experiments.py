"""Reproducible Monte Carlo experiments over (model, rule) grids.

Replicate r always draws from substream r of the master seed, so a
report depends only on the configuration: execution order and worker
count cannot change a single byte of it. Aggregation is plain integer
counting, which merges commutatively across workers.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .errors import ParameterError
from .generators import GeneratorConfig, generate_profile
from .profiles import EvaluationProfile
from .rng import SeededRandomSource
from .rules import (
    DepthSpec,
    ElectionResult,
    approval_winner,
    condorcet_loser,
    condorcet_winner,
    deepest_voting_winner,
    majority_judgement_winner,
    profile_to_rankings,
    range_winner,
)

RULE_NAMES = ("approval", "range", "mj", "deepest")


@dataclass(frozen=True)
class RuleSpec:
    """A rule identifier with its parameters, validated at construction."""

    name: str
    threshold: float = 0.5  # approval only
    p: float = 2.0          # deepest only

    def __post_init__(self):
        if self.name not in RULE_NAMES:
            raise ParameterError(
                f"unknown rule {self.name!r}; expected one of {RULE_NAMES}"
            )
        if self.name == "approval" and not 0.0 <= self.threshold <= 1.0:
            raise ParameterError(
                f"approval threshold must lie in [0, 1], got {self.threshold}"
            )
        if self.name == "deepest":
            DepthSpec(self.p)  # checks p > 0
            if self.p < 1.0:
                raise ParameterError(
                    f"deepest voting supports p >= 1, got p={self.p}"
                )

    @property
    def identifier(self) -> str:
        if self.name == "approval":
            return f"approval(threshold={self.threshold:g})"
        if self.name == "deepest":
            return f"deepest(p={self.p:g})"
        return self.name


def run_rule(profile: EvaluationProfile, rule: RuleSpec) -> ElectionResult:
    """Run one configured rule on a profile."""
    if rule.name == "approval":
        return approval_winner(profile, rule.threshold)
    if rule.name == "range":
        return range_winner(profile)
    if rule.name == "mj":
        return majority_judgement_winner(profile)
    return deepest_voting_winner(profile, DepthSpec(rule.p))


@dataclass(frozen=True)
class ExperimentConfig:
    model: GeneratorConfig
    n: int
    d: int
    replicates: int
    rules: tuple[RuleSpec, ...]
    master_seed: int

    def __post_init__(self):
        if self.n < 1 or self.d < 1:
            raise ParameterError(
                f"experiment needs n >= 1 and d >= 1, got n={self.n}, d={self.d}"
            )
        if self.replicates < 1:
            raise ParameterError(f"need at least one replicate, got {self.replicates}")
        if not self.rules:
            raise ParameterError("experiment needs at least one rule")
        object.__setattr__(self, "rules", tuple(self.rules))
        SeededRandomSource(self.master_seed)  # validates the seed range


@dataclass
class _Tally:
    """Mergeable integer counts accumulated over replicates."""

    n_rules: int
    replicates: int = 0
    with_winner: int = 0
    with_loser: int = 0
    elects_winner: np.ndarray = field(init=False)
    elects_loser: np.ndarray = field(init=False)
    agreement: np.ndarray = field(init=False)

    def __post_init__(self):
        self.elects_winner = np.zeros(self.n_rules, dtype=np.int64)
        self.elects_loser = np.zeros(self.n_rules, dtype=np.int64)
        self.agreement = np.zeros((self.n_rules, self.n_rules), dtype=np.int64)

    def add(self, winners: tuple[int, ...], cw: int | None, cl: int | None) -> None:
        self.replicates += 1
        w = np.asarray(winners)
        if cw is not None:
            self.with_winner += 1
            self.elects_winner += w == cw
        if cl is not None:
            self.with_loser += 1
            self.elects_loser += w == cl
        self.agreement += w[:, None] == w[None, :]

    def merge(self, other: "_Tally") -> None:
        self.replicates += other.replicates
        self.with_winner += other.with_winner
        self.with_loser += other.with_loser
        self.elects_winner += other.elects_winner
        self.elects_loser += other.elects_loser
        self.agreement += other.agreement


def _run_replicates(config: ExperimentConfig, start: int, stop: int) -> _Tally:
    tally = _Tally(len(config.rules))
    for r in range(start, stop):
        source = SeededRandomSource(config.master_seed, stream_index=r)
        profile = generate_profile(config.model, config.n, config.d, source).profile
        rankings = profile_to_rankings(profile)
        cw = condorcet_winner(rankings)
        cl = condorcet_loser(rankings)
        winners = tuple(run_rule(profile, rule).winner for rule in config.rules)
        tally.add(winners, cw, cl)
    return tally


@dataclass(frozen=True, eq=False)
class ExperimentReport:
    """Aggregated experiment outcome with every frequency's denominator."""

    config_echo: dict
    master_seed: int
    replicates: int
    rule_ids: tuple[str, ...]
    with_condorcet_winner: int
    with_condorcet_loser: int
    elects_condorcet_winner: tuple[int, ...]
    elects_condorcet_loser: tuple[int, ...]
    agreement_counts: tuple[tuple[int, ...], ...]

    def winner_frequency(self, rule_index: int) -> float | None:
        """Frequency of electing the Condorcet winner, conditional on one existing."""
        if self.with_condorcet_winner == 0:
            return None
        return self.elects_condorcet_winner[rule_index] / self.with_condorcet_winner

    def loser_frequency(self, rule_index: int) -> float | None:
        if self.with_condorcet_loser == 0:
            return None
        return self.elects_condorcet_loser[rule_index] / self.with_condorcet_loser

    def agreement_fraction(self, i: int, j: int) -> float:
        return self.agreement_counts[i][j] / self.replicates

    def to_json_dict(self) -> dict:
        per_rule = {}
        for k, rule_id in enumerate(self.rule_ids):
            per_rule[rule_id] = {
                "condorcet_winner_elected": int(self.elects_condorcet_winner[k]),
                "condorcet_winner_frequency": self.winner_frequency(k),
                "condorcet_loser_elected": int(self.elects_condorcet_loser[k]),
                "condorcet_loser_frequency": self.loser_frequency(k),
            }
        agreement = [
            [self.agreement_counts[i][j] / self.replicates for j in range(len(self.rule_ids))]
            for i in range(len(self.rule_ids))
        ]
        return {
            "config": self.config_echo,
            "master_seed": self.master_seed,
            "replicates": self.replicates,
            "condorcet": {
                "replicates_with_winner": self.with_condorcet_winner,
                "replicates_without_winner": self.replicates - self.with_condorcet_winner,
                "replicates_with_loser": self.with_condorcet_loser,
                "replicates_without_loser": self.replicates - self.with_condorcet_loser,
            },
            "rules": list(self.rule_ids),
            "per_rule": per_rule,
            "agreement_matrix": agreement,
        }


def _model_echo(model: GeneratorConfig) -> dict:
    """JSON-able echo of a model configuration (not of per-replicate draws)."""
    from .generators import (
        BetaModel,
        CopulaModel,
        DirichletModel,
        NormalModel,
        SpatialModel,
        UniformModel,
    )

    if isinstance(model, UniformModel):
        return {"model": "uniform"}
    if isinstance(model, DirichletModel):
        return {"model": "dirichlet"}
    if isinstance(model, CopulaModel):
        corr = (
            "sampled-per-replicate"
            if model.correlation is None
            else np.asarray(model.correlation).tolist()
        )
        return {"model": "copula", "correlation": corr}
    if isinstance(model, NormalModel):
        means = (
            "sampled-per-replicate"
            if model.means is None
            else list(map(float, model.means))
        )
        return {"model": "normal", "sigma": model.sigma, "means": means}
    if isinstance(model, BetaModel):
        params = (
            "sampled-per-replicate"
            if model.params is None
            else [[float(a), float(b)] for a, b in model.params]
        )
        return {"model": "beta", "params": params}
    if isinstance(model, SpatialModel):
        return {
            "model": "spatial",
            "dim": model.dim,
            "mapping": model.mapping.to_json_dict(),
        }
    raise ParameterError(f"unknown model configuration: {model!r}")


def run_experiment(config: ExperimentConfig, workers: int = 1) -> ExperimentReport:
    """Run every replicate, elect under every rule, and aggregate.

    Replicate r generates its profile from substream r, extracts the
    rankings, finds the Condorcet winner and loser, and records which
    rules elected them plus pairwise winner agreement. With ``workers``
    above 1 the replicate range is split across processes; the merged
    report is identical for any worker count.
    """
    if workers < 1:
        raise ParameterError(f"workers must be positive, got {workers}")
    total = config.replicates
    tally = _Tally(len(config.rules))
    if workers == 1 or total == 1:
        tally.merge(_run_replicates(config, 0, total))
    else:
        chunk = max(1, -(-total // (workers * 4)))
        bounds = [(s, min(s + chunk, total)) for s in range(0, total, chunk)]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            for part in pool.map(
                _run_replicates, [config] * len(bounds),
                [b[0] for b in bounds], [b[1] for b in bounds],
            ):
                tally.merge(part)

    echo = {
        "voters": config.n,
        "candidates": config.d,
        "replicates": config.replicates,
        "rules": [rule.identifier for rule in config.rules],
        **_model_echo(config.model),
    }
    return ExperimentReport(
        config_echo=echo,
        master_seed=config.master_seed,
        replicates=tally.replicates,
        rule_ids=tuple(rule.identifier for rule in config.rules),
        with_condorcet_winner=tally.with_winner,
        with_condorcet_loser=tally.with_loser,
        elects_condorcet_winner=tuple(int(c) for c in tally.elects_winner),
        elects_condorcet_loser=tuple(int(c) for c in tally.elects_loser),
        agreement_counts=tuple(tuple(int(c) for c in row) for row in tally.agreement),
    )
