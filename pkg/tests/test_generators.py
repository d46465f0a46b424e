import math

import numpy as np
import pytest
from scipy.stats import ks_2samp, spearmanr

from evalvote import (
    BetaModel,
    CopulaModel,
    DimensionError,
    DirichletModel,
    LinearMapping,
    MatrixError,
    NormalModel,
    ParameterError,
    SeededRandomSource,
    SigmoidMapping,
    SpatialModel,
    UniformModel,
    default_spatial_dim,
    gen_eiac_copula,
    gen_eic_beta,
    gen_eic_dirichlet,
    gen_eic_normal,
    gen_eic_uniform,
    gen_spatial,
    generate_profile,
    ks_uniform_statistic,
    normal_cdf,
    profile_to_rankings,
    random_correlation_matrix,
    sample_beta_params,
    sample_candidate_means,
    validate,
)

KS_1PCT = lambda n: 1.63 / math.sqrt(n)


class TestUniform:
    def test_sample_means(self):
        profile = gen_eic_uniform(10_000, 3, SeededRandomSource(101))
        means = profile.values.mean(axis=0)
        assert np.all(means > 0.49) and np.all(means < 0.51)

    def test_single_draw_in_range(self):
        profile = gen_eic_uniform(1, 1, SeededRandomSource(5))
        assert 0.0 <= profile.values[0, 0] <= 1.0

    def test_deterministic(self):
        a = gen_eic_uniform(20, 4, SeededRandomSource(9, 2))
        b = gen_eic_uniform(20, 4, SeededRandomSource(9, 2))
        assert np.array_equal(a.values, b.values)

    def test_margin_ks(self):
        profile = gen_eic_uniform(10_000, 3, SeededRandomSource(102))
        for i in range(3):
            assert ks_uniform_statistic(profile.values[:, i]) < KS_1PCT(10_000)

    def test_bad_dimensions(self):
        with pytest.raises(DimensionError):
            gen_eic_uniform(0, 3, SeededRandomSource(1))


class TestDirichlet:
    def test_two_candidates_rows_are_01_permutations(self):
        profile = gen_eic_dirichlet(200, 2, SeededRandomSource(103))
        assert np.all(np.sort(profile.values, axis=1) == np.array([0.0, 1.0]))

    def test_every_row_hits_both_endpoints(self):
        profile = gen_eic_dirichlet(5_000, 5, SeededRandomSource(104))
        assert np.all(profile.values.min(axis=1) == 0.0)
        assert np.all(profile.values.max(axis=1) == 1.0)

    def test_per_candidate_endpoint_frequencies(self):
        # with 5 candidates each one lands on 0 (and on 1) for ~20% of voters
        n = 10_000
        profile = gen_eic_dirichlet(n, 5, SeededRandomSource(105))
        tol = 3.0 * math.sqrt(0.2 * 0.8 / n)
        zero_freq = (profile.values == 0.0).mean(axis=0)
        one_freq = (profile.values == 1.0).mean(axis=0)
        assert np.all(np.abs(zero_freq - 0.2) < tol)
        assert np.all(np.abs(one_freq - 0.2) < tol)

    def test_single_candidate_rejected(self):
        with pytest.raises(ParameterError):
            gen_eic_dirichlet(10, 1, SeededRandomSource(1))


class TestCopula:
    def test_identity_margins_uniform(self):
        n = 10_000
        profile = gen_eiac_copula(n, 3, np.eye(3), SeededRandomSource(106))
        for i in range(3):
            assert ks_uniform_statistic(profile.values[:, i]) < KS_1PCT(n)

    def test_rank_correlation_matches_gaussian_identity(self):
        rho = 0.9
        corr = np.array([[1.0, rho], [rho, 1.0]])
        profile = gen_eiac_copula(10_000, 2, corr, SeededRandomSource(107))
        expected = 6.0 / math.pi * math.asin(rho / 2.0)
        observed = spearmanr(profile.values[:, 0], profile.values[:, 1]).statistic
        assert observed == pytest.approx(expected, abs=0.03)

    def test_one_dimensional_copula_is_uniform(self):
        copula = gen_eiac_copula(10_000, 1, np.eye(1), SeededRandomSource(108))
        uniform = gen_eic_uniform(10_000, 1, SeededRandomSource(109))
        result = ks_2samp(copula.values[:, 0], uniform.values[:, 0])
        assert result.pvalue > 0.01

    def test_non_psd_matrix_reports_pivot(self):
        bad = np.array([[1.0, 0.95, -0.95], [0.95, 1.0, 0.95], [-0.95, 0.95, 1.0]])
        with pytest.raises(MatrixError) as excinfo:
            gen_eiac_copula(100, 3, bad, SeededRandomSource(1))
        assert excinfo.value.pivot is not None

    def test_deterministic(self):
        corr = random_correlation_matrix(3, SeededRandomSource(44))
        a = gen_eiac_copula(50, 3, corr, SeededRandomSource(45))
        b = gen_eiac_copula(50, 3, corr, SeededRandomSource(45))
        assert np.array_equal(a.values, b.values)


class TestNormal:
    def test_truncation_mass_at_zero(self):
        n = 10_000
        profile = gen_eic_normal(n, 1, [0.5], 0.25, SeededRandomSource(110))
        expected = normal_cdf(-2.0)  # P(N(0.5, 0.25) <= 0)
        assert (profile.values == 0.0).mean() == pytest.approx(expected, abs=0.006)

    def test_truncation_masses_general(self):
        n = 40_000
        mu = np.array([0.3, 0.7])
        profile = gen_eic_normal(n, 2, mu, 0.25, SeededRandomSource(111))
        for i in range(2):
            p_zero = float(normal_cdf(-mu[i] / 0.25))
            p_one = float(normal_cdf((mu[i] - 1.0) / 0.25))
            tol_zero = 3.0 * math.sqrt(p_zero * (1 - p_zero) / n)
            tol_one = 3.0 * math.sqrt(p_one * (1 - p_one) / n)
            assert (profile.values[:, i] == 0.0).mean() == pytest.approx(p_zero, abs=tol_zero)
            assert (profile.values[:, i] == 1.0).mean() == pytest.approx(p_one, abs=tol_one)

    def test_degenerate_sigma_collapses_to_means(self):
        profile = gen_eic_normal(50, 2, [0.25, 0.75], 1e-9, SeededRandomSource(112))
        assert np.allclose(profile.values, [0.25, 0.75], atol=1e-6)

    def test_symmetric_mean_balances_endpoint_masses(self):
        profile = gen_eic_normal(100_000, 1, [0.5], 0.25, SeededRandomSource(113))
        zero_frac = (profile.values == 0.0).mean()
        one_frac = (profile.values == 1.0).mean()
        assert abs(zero_frac - one_frac) < 0.003

    def test_parameter_errors(self):
        with pytest.raises(ParameterError):
            gen_eic_normal(10, 1, [0.5], 0.0, SeededRandomSource(1))
        with pytest.raises(ParameterError):
            gen_eic_normal(10, 1, [1.5], 0.25, SeededRandomSource(1))
        with pytest.raises(DimensionError):
            gen_eic_normal(10, 2, [0.5], 0.25, SeededRandomSource(1))


class TestSampleCandidateMeans:
    def test_mean_of_means(self):
        means = sample_candidate_means(10_000, SeededRandomSource(114))
        assert 0.49 < means.mean() < 0.51

    def test_range_and_determinism(self):
        a = sample_candidate_means(100, SeededRandomSource(115))
        b = sample_candidate_means(100, SeededRandomSource(115))
        assert np.all((a >= 0.0) & (a <= 1.0))
        assert np.array_equal(a, b)


class TestBeta:
    def test_flat_beta_is_uniform(self):
        n = 10_000
        profile = gen_eic_beta(n, 1, [(1.0, 1.0)], SeededRandomSource(116))
        assert ks_uniform_statistic(profile.values[:, 0]) < KS_1PCT(n)

    def test_moments_of_symmetric_beta(self):
        # Beta(2,2): mean 1/2, variance 1/20
        profile = gen_eic_beta(10_000, 1, [(2.0, 2.0)], SeededRandomSource(117))
        column = profile.values[:, 0]
        assert column.mean() == pytest.approx(0.5, abs=0.01)
        assert column.var() == pytest.approx(0.05, abs=0.005)

    def test_interior_support_for_shapes_at_least_one(self):
        profile = gen_eic_beta(20_000, 2, [(1.0, 2.0), (3.0, 1.5)], SeededRandomSource(118))
        assert np.all((profile.values > 0.0) & (profile.values < 1.0))

    def test_nonpositive_parameter_rejected(self):
        with pytest.raises(ParameterError):
            gen_eic_beta(10, 1, [(0.0, 1.0)], SeededRandomSource(1))


class TestSampleBetaParams:
    def test_quadrants_equally_likely(self):
        params = sample_beta_params(10_000, SeededRandomSource(119))
        below = params < 1.0
        for a_low in (True, False):
            for b_low in (True, False):
                frequency = np.mean((below[:, 0] == a_low) & (below[:, 1] == b_low))
                assert frequency == pytest.approx(0.25, abs=0.015)

    def test_support_and_determinism(self):
        a = sample_beta_params(500, SeededRandomSource(120))
        b = sample_beta_params(500, SeededRandomSource(120))
        assert np.all((a >= 0.5) & (a <= 5.0))
        assert np.array_equal(a, b)


class TestSpatial:
    def test_linear_mapping_values(self):
        mapping = LinearMapping()
        assert mapping(0.0) == 1.0
        assert mapping(1.0) == 0.0
        assert mapping(1.7) == 0.0
        assert mapping(0.25) == 0.75

    def test_sigmoid_midpoint_and_origin(self):
        mapping = SigmoidMapping(steepness=5.0, distance_scale=2.0)
        assert mapping(0.5) == pytest.approx(0.5, abs=0)  # exponent vanishes
        assert mapping(0.0) == pytest.approx(1.0 / (1.0 + math.exp(-5.0)), abs=1e-12)

    def test_profile_matches_scene_geometry(self):
        profile, scene = gen_spatial(40, 6, 3, LinearMapping(), SeededRandomSource(121))
        dists = np.linalg.norm(
            scene.voters[:, None, :] - scene.candidates[None, :, :], axis=2
        )
        assert np.array_equal(profile.values, np.maximum(0.0, 1.0 - dists))
        assert np.all((scene.voters >= 0) & (scene.voters <= 1))
        assert np.all((scene.candidates >= 0) & (scene.candidates <= 1))

    def test_triangle_bound_for_linear_mapping(self):
        profile, scene = gen_spatial(400, 8, 2, LinearMapping(), SeededRandomSource(122))
        values = profile.values
        cand_dists = np.linalg.norm(
            scene.candidates[:, None, :] - scene.candidates[None, :, :], axis=2
        )
        for i in range(8):
            for k in range(i + 1, 8):
                both = (values[:, i] > 0) & (values[:, k] > 0)
                slack = (1 - values[both, i]) + (1 - values[both, k])
                assert np.all(slack >= cand_dists[i, k] - 1e-12)

    def test_default_dimension_rule(self):
        assert default_spatial_dim(2) == 2
        assert default_spatial_dim(4) == 2
        assert default_spatial_dim(5) == 3
        assert default_spatial_dim(9) == 3

    def test_invalid_dim(self):
        with pytest.raises(ParameterError):
            gen_spatial(5, 2, 0, LinearMapping(), SeededRandomSource(1))
        with pytest.raises(ParameterError):
            SigmoidMapping(steepness=0.0)


ALL_MODELS = [
    UniformModel(),
    DirichletModel(),
    CopulaModel(None),
    NormalModel(),
    BetaModel(None),
    SpatialModel(),
]


@pytest.mark.parametrize("model", ALL_MODELS, ids=lambda m: type(m).__name__)
class TestEveryModel:
    def test_output_validates(self, model):
        result = generate_profile(model, 300, 4, SeededRandomSource(123))
        assert validate(result.profile).ok
        assert result.profile.values.shape == (300, 4)

    def test_pure_in_the_source(self, model):
        a = generate_profile(model, 60, 5, SeededRandomSource(124, 3))
        b = generate_profile(model, 60, 5, SeededRandomSource(124, 3))
        assert np.array_equal(a.profile.values, b.profile.values)
        assert a.resolved == b.resolved


class TestResolvedConfig:
    def test_normal_echoes_sampled_means(self):
        result = generate_profile(NormalModel(), 10, 3, SeededRandomSource(125))
        assert result.resolved["model"] == "normal"
        assert len(result.resolved["means"]) == 3
        assert all(0.0 <= m <= 1.0 for m in result.resolved["means"])

    def test_beta_echoes_sampled_params(self):
        result = generate_profile(BetaModel(), 10, 4, SeededRandomSource(126))
        assert len(result.resolved["params"]) == 4

    def test_spatial_resolves_dim_and_returns_scene(self):
        result = generate_profile(SpatialModel(), 10, 6, SeededRandomSource(127))
        assert result.resolved["dim"] == 3
        assert result.scene is not None and result.scene.dim == 3


def test_iid_rankings_equidistributed():
    """Uniform grades induce uniformly random strict orders (chi-square, 1%)."""
    n = 10_000
    profile = gen_eic_uniform(n, 3, SeededRandomSource(128))
    rankings = profile_to_rankings(profile)
    _, counts = np.unique(rankings, axis=0, return_counts=True)
    assert counts.size == 6  # all strict orders observed, no ties at n=1e4
    expected = n / 6.0
    chi_square = float(np.sum((counts - expected) ** 2 / expected))
    assert chi_square < 15.09  # 1% critical value, 5 degrees of freedom
