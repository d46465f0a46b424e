import math

import mpmath
import numpy as np
import pytest

from evalvote import (
    DimensionError,
    MatrixError,
    ParameterError,
    SeededRandomSource,
    cholesky_lower,
    nearest_correlation_matrix,
    normal_cdf,
    normal_quantile,
    random_correlation_matrix,
    validate_correlation_matrix,
)


def quadrature_normal_cdf(x: float) -> float:
    """Independent oracle: adaptive quadrature of the standard normal density."""
    density = lambda t: mpmath.exp(-t * t / 2) / mpmath.sqrt(2 * mpmath.pi)
    return float(mpmath.quad(density, [-40, x]))


class TestNormalCdf:
    def test_at_zero(self):
        assert normal_cdf(0.0) == pytest.approx(0.5, abs=1e-15)

    @pytest.mark.parametrize("x", [-3.0, -2.0, -1.0, -0.5, 0.3, 1.7, 2.5])
    def test_against_quadrature_oracle(self, x):
        assert normal_cdf(x) == pytest.approx(quadrature_normal_cdf(x), abs=1e-7)

    def test_minus_two_value(self):
        assert normal_cdf(-2.0) == pytest.approx(0.0227501, abs=1e-6)

    @pytest.mark.parametrize("x", [0.1, 1.0, 3.0])
    def test_symmetry_identity(self, x):
        assert normal_cdf(x) + normal_cdf(-x) == pytest.approx(1.0, abs=1e-7)

    def test_vectorized(self):
        xs = np.array([-1.0, 0.0, 1.0])
        out = normal_cdf(xs)
        assert out.shape == (3,)
        assert out[1] == pytest.approx(0.5)


class TestNormalQuantile:
    @pytest.mark.parametrize("u", [0.01, 0.2275, 0.5, 0.84134, 0.999])
    def test_round_trip(self, u):
        assert normal_cdf(normal_quantile(u)) == pytest.approx(u, abs=1e-8)

    def test_vector_round_trip(self):
        u = np.linspace(0.001, 0.999, 57)
        back = normal_cdf(normal_quantile(u))
        assert np.max(np.abs(back - u)) < 1e-8

    @pytest.mark.parametrize("u", [0.0, 1.0, -0.2, 1.3])
    def test_open_interval_enforced(self, u):
        with pytest.raises(ParameterError):
            normal_quantile(u)


class TestCholesky:
    def test_identity(self):
        assert np.array_equal(cholesky_lower(np.eye(4)), np.eye(4))

    def test_two_by_two_hand_solve(self):
        # LL^T = [[1, .6], [.6, 1]] solves to L = [[1, 0], [.6, .8]]
        lower = cholesky_lower(np.array([[1.0, 0.6], [0.6, 1.0]]))
        assert lower == pytest.approx(np.array([[1.0, 0.0], [0.6, 0.8]]), abs=1e-12)

    def test_indefinite_reports_pivot(self):
        bad = np.array([[1.0, 1.0001], [1.0001, 1.0]])
        with pytest.raises(MatrixError) as excinfo:
            cholesky_lower(bad)
        assert excinfo.value.pivot == 1

    def test_reconstruction_error_bound(self):
        rng = SeededRandomSource(314, 0)
        for stream in range(5):
            corr = random_correlation_matrix(6, rng.substream(stream))
            lower = cholesky_lower(corr)
            assert np.max(np.abs(lower @ lower.T - corr)) < 1e-10

    def test_semidefinite_shift_tolerated(self):
        # rank-1 correlation matrix: perfectly dependent pair
        singular = np.array([[1.0, 1.0], [1.0, 1.0]])
        lower = cholesky_lower(singular)
        assert np.max(np.abs(lower @ lower.T - singular)) <= 2e-10

    def test_non_square_rejected(self):
        with pytest.raises(DimensionError):
            cholesky_lower(np.ones((2, 3)))


class TestRandomCorrelationMatrix:
    def test_one_dimensional(self):
        assert random_correlation_matrix(1, SeededRandomSource(1)).tolist() == [[1.0]]

    @pytest.mark.parametrize("d", [2, 3, 5, 8])
    def test_validity_by_construction(self, d):
        corr = random_correlation_matrix(d, SeededRandomSource(2024, d))
        validated = validate_correlation_matrix(corr, d)
        off = validated[~np.eye(d, dtype=bool)]
        assert np.all(off >= -1.0) and np.all(off <= 1.0)
        assert np.all(np.diag(validated) == 1.0)

    def test_cholesky_succeeds(self):
        corr = random_correlation_matrix(7, SeededRandomSource(77))
        cholesky_lower(corr)  # must not raise

    def test_deterministic(self):
        a = random_correlation_matrix(4, SeededRandomSource(5, 1))
        b = random_correlation_matrix(4, SeededRandomSource(5, 1))
        assert np.array_equal(a, b)


class TestValidateCorrelationMatrix:
    def test_asymmetric_rejected(self):
        with pytest.raises(MatrixError):
            validate_correlation_matrix(np.array([[1.0, 0.2], [0.3, 1.0]]))

    def test_bad_diagonal_rejected(self):
        with pytest.raises(MatrixError):
            validate_correlation_matrix(np.array([[1.0, 0.0], [0.0, 0.9]]))

    def test_off_diagonal_range(self):
        with pytest.raises(MatrixError):
            validate_correlation_matrix(np.array([[1.0, 1.5], [1.5, 1.0]]))

    def test_size_pin(self):
        with pytest.raises(DimensionError):
            validate_correlation_matrix(np.eye(3), d=2)


class TestNearestCorrelationMatrix:
    def test_projection_fixes_indefiniteness(self):
        # slightly indefinite: eigenvalues contain a small negative one
        near = np.array([
            [1.0, 0.9, -0.9],
            [0.9, 1.0, 0.9],
            [-0.9, 0.9, 1.0],
        ])
        fixed = nearest_correlation_matrix(near)
        validate_correlation_matrix(fixed, 3)

    def test_valid_input_nearly_unchanged(self):
        corr = np.array([[1.0, 0.4], [0.4, 1.0]])
        assert nearest_correlation_matrix(corr) == pytest.approx(corr, abs=1e-7)


def test_spearman_identity_cross_check():
    """Gaussian-copula rank correlation: rho_s = (6/pi) asin(rho/2).

    Verified by independent Monte Carlo over bivariate normals, which
    backs the constant used in the copula dependence tests.
    """
    rho = 0.9
    expected = 6.0 / math.pi * math.asin(rho / 2.0)
    g = SeededRandomSource(246).generator()
    cov = np.array([[1.0, rho], [rho, 1.0]])
    z = g.multivariate_normal([0.0, 0.0], cov, size=200_000, method="cholesky")
    from scipy.stats import spearmanr

    observed = spearmanr(z[:, 0], z[:, 1]).statistic
    assert observed == pytest.approx(expected, abs=0.01)
