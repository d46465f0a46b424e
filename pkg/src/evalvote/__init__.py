"""Evaluation-based voting: profile generators, election rules, experiments.

The package generates synthetic grade profiles under six simulation
models, elects winners under approval, range, majority-judgement, and
deepest-voting rules, and runs seeded Monte Carlo experiments comparing
them (Condorcet agreement frequencies, rule agreement, descriptive
statistics, parametric fits from real ballot data).
"""

from .analysis import (
    CorrelationReport,
    HistogramData,
    empirical_correlation,
    fit_beta_moments,
    fit_gaussian_copula,
    histogram,
    ks_uniform_critical,
    ks_uniform_statistic,
    pairwise_scatter,
)
from .dataio import (
    BallotFileSpec,
    LoadedBallots,
    MissingPolicy,
    canonical_json,
    read_ballots_csv,
    read_profile_csv,
    write_profile_csv,
    write_report_json,
)
from .errors import (
    DataError,
    DimensionError,
    EvalvoteError,
    FitError,
    MatrixError,
    ParameterError,
)
from .experiments import (
    ExperimentConfig,
    ExperimentReport,
    RuleSpec,
    run_experiment,
    run_rule,
)
from .generators import (
    BetaModel,
    CopulaModel,
    DirichletModel,
    GenerationResult,
    LinearMapping,
    NormalModel,
    SigmoidMapping,
    SpatialModel,
    SpatialScene,
    UniformModel,
    default_spatial_dim,
    gen_eiac_copula,
    gen_eic_beta,
    gen_eic_dirichlet,
    gen_eic_normal,
    gen_eic_uniform,
    gen_spatial,
    generate_profile,
    random_correlation_matrix,
    sample_beta_params,
    sample_candidate_means,
)
from .numerics import (
    cholesky_lower,
    nearest_correlation_matrix,
    normal_cdf,
    normal_quantile,
    validate_correlation_matrix,
)
from .profiles import (
    CONTINUOUS,
    EvaluationProfile,
    GradeScale,
    ValidationIssue,
    ValidationReport,
    new_profile,
    quantize,
    validate,
)
from .rng import SeededRandomSource, as_generator
from .rules import (
    DepthSpec,
    ElectionResult,
    TieBreak,
    approval_winner,
    condorcet_loser,
    condorcet_winner,
    deepest_point,
    deepest_voting_winner,
    lower_median,
    majority_judgement_winner,
    pairwise_majority_matrix,
    profile_to_rankings,
    range_winner,
    wlp_depth,
)

__version__ = "0.1.0"
