import numpy as np
import pytest
from numpy.testing import assert_allclose

import maxcorr as mx
from maxcorr.errors import (
    DegenerateY,
    InconsistentMoments,
    InvalidRho,
    NotSymmetric,
    ValidationError,
)


def moments_from_cov(sigma, mu=None):
    sigma = np.asarray(sigma, dtype=float)
    if mu is None:
        mu = np.zeros(sigma.shape[0])
    mu = np.asarray(mu, dtype=float)
    return mx.GaussianMoments(mu, sigma + np.outer(mu, mu))


def two_feature_moments():
    """Sigma_XX = [[1,.5],[.5,1]], Sigma_XY = (.6,.3), Var Y = 1."""
    return moments_from_cov([[1.0, 0.5, 0.6], [0.5, 1.0, 0.3], [0.6, 0.3, 1.0]])


class TestGaussianMoments:
    def test_rejects_asymmetric_lambda(self):
        with pytest.raises(NotSymmetric):
            mx.GaussianMoments(np.zeros(2), np.array([[1.0, 0.2], [0.0, 1.0]]))

    def test_rejects_indefinite_covariance(self):
        with pytest.raises(InconsistentMoments):
            moments_from_cov([[1.0, 2.0], [2.0, 1.0]])

    def test_covariance_blocks(self):
        moments = two_feature_moments()
        assert moments.p == 2
        assert_allclose(moments.sigma_xx, [[1.0, 0.5], [0.5, 1.0]], atol=1e-15)
        assert_allclose(moments.sigma_xy, [0.6, 0.3], atol=1e-15)
        assert moments.var_y == pytest.approx(1.0, abs=1e-15)

    def test_mean_shift_does_not_change_covariance(self):
        mu = np.array([3.0, -1.0, 2.0])
        sigma = np.array([[1.0, 0.5, 0.6], [0.5, 1.0, 0.3], [0.6, 0.3, 1.0]])
        moments = moments_from_cov(sigma, mu)
        assert_allclose(moments.sigma, sigma, atol=1e-12)


class TestRegressionVector:
    def test_identity_feature_covariance(self):
        moments = moments_from_cov([[1.0, 0.0, 0.7], [0.0, 1.0, 0.0], [0.7, 0.0, 1.0]])
        assert_allclose(mx.regression_vector(moments), [0.7, 0.0], atol=1e-12)

    def test_correlated_features_hand_inverse(self):
        # [[1,.5],[.5,1]]^{-1} (.6,.3)' = (.6, 0)'
        assert_allclose(mx.regression_vector(two_feature_moments()), [0.6, 0.0], atol=1e-12)

    def test_zero_cross_covariance(self):
        moments = moments_from_cov([[1.0, 0.5, 0.0], [0.5, 1.0, 0.0], [0.0, 0.0, 1.0]])
        assert_allclose(mx.regression_vector(moments), [0.0, 0.0], atol=1e-15)

    def test_residual_uncorrelated_with_features(self):
        moments = two_feature_moments()
        a = mx.regression_vector(moments)
        residual_cov = moments.sigma_xy - moments.sigma_xx @ a
        assert np.abs(residual_cov).max() < 1e-8

    def test_collinear_features_use_pseudoinverse(self):
        # X2 = X1 exactly; cross-covariance stays in the range of Sigma_XX
        moments = moments_from_cov([[1.0, 1.0, 0.5], [1.0, 1.0, 0.5], [0.5, 0.5, 1.0]])
        a = mx.regression_vector(moments)
        assert np.abs(moments.sigma_xx @ a - moments.sigma_xy).max() < 1e-10


class TestMinHgrGaussian:
    def test_bivariate_equals_absolute_correlation(self):
        for rho in (-0.8, -0.3, 0.0, 0.25, 0.9):
            moments = moments_from_cov([[1.0, rho], [rho, 1.0]])
            assert mx.min_hgr_gaussian(moments) == pytest.approx(abs(rho), abs=1e-12)

    def test_two_feature_fixture(self):
        assert mx.min_hgr_gaussian(two_feature_moments()) == pytest.approx(0.6, abs=1e-12)

    def test_zero_cross_covariance_is_zero(self):
        moments = moments_from_cov([[1.0, 0.5, 0.0], [0.5, 1.0, 0.0], [0.0, 0.0, 1.0]])
        assert mx.min_hgr_gaussian(moments) == pytest.approx(0.0, abs=1e-15)

    def test_degenerate_target_rejected(self):
        moments = moments_from_cov([[1.0, 0.0], [0.0, 0.0]])
        with pytest.raises(DegenerateY):
            mx.min_hgr_gaussian(moments)

    @pytest.mark.parametrize("seed", range(10))
    def test_bivariate_matches_pearson_exactly(self, seed):
        rng = np.random.default_rng(seed)
        var_x, var_y = rng.uniform(0.5, 2.0, size=2)
        cov = rng.uniform(-1.0, 1.0) * np.sqrt(var_x * var_y)
        moments = moments_from_cov([[var_x, cov], [cov, var_y]])
        assert mx.min_hgr_gaussian(moments) == pytest.approx(
            abs(cov) / np.sqrt(var_x * var_y), abs=1e-12
        )

    @pytest.mark.parametrize("seed", range(10))
    def test_affine_recoding_invariance(self, seed):
        rng = np.random.default_rng(seed)
        base = two_feature_moments()
        scales = rng.uniform(0.5, 3.0, size=3)
        shifts = rng.uniform(-2.0, 2.0, size=3)
        d = np.diag(scales)
        sigma = d @ base.sigma @ d
        moments = moments_from_cov(sigma, mu=shifts)
        assert mx.min_hgr_gaussian(moments) == pytest.approx(
            mx.min_hgr_gaussian(base), abs=1e-10
        )

    @pytest.mark.parametrize("seed", range(5))
    def test_equals_pearson_of_projected_feature(self, seed):
        rng = np.random.default_rng(seed + 50)
        b = rng.standard_normal((3, 3))
        sigma = b @ b.T + 0.1 * np.eye(3)
        moments = moments_from_cov(sigma)
        a = mx.regression_vector(moments)
        var_ax = float(a @ moments.sigma_xx @ a)
        if var_ax == 0.0:
            pytest.skip("zero projection for this draw")
        pearson = float(a @ moments.sigma_xy) / np.sqrt(var_ax * moments.var_y)
        assert mx.min_hgr_gaussian(moments) == pytest.approx(abs(pearson), abs=1e-12)


class TestDiscretizedGaussian:
    def test_independent_case_is_exact_product(self):
        joint, _ = mx.discretize_bivariate_gaussian(0.0, grid_n=64, half_width=5.0)
        px = joint.prob.sum(axis=1)
        py = joint.prob.sum(axis=0)
        assert np.abs(joint.prob - np.outer(px, py)).max() < 1e-15
        assert mx.hgr_svd(joint).rho == pytest.approx(0.0, abs=1e-10)

    def test_half_correlation_recovered(self):
        joint, tail = mx.discretize_bivariate_gaussian(0.5, grid_n=200, half_width=5.0)
        assert abs(mx.hgr_svd(joint).rho - 0.5) <= 1e-2
        assert 0 <= tail < 1e-4

    def test_sign_blindness(self):
        plus, _ = mx.discretize_bivariate_gaussian(0.5, grid_n=80, half_width=5.0)
        minus, _ = mx.discretize_bivariate_gaussian(-0.5, grid_n=80, half_width=5.0)
        assert mx.hgr_svd(minus).rho == pytest.approx(mx.hgr_svd(plus).rho, abs=1e-12)

    def test_error_shrinks_under_grid_refinement(self):
        errors = []
        for grid_n in (50, 100, 200):
            joint, _ = mx.discretize_bivariate_gaussian(0.5, grid_n=grid_n, half_width=5.0)
            errors.append(abs(mx.hgr_svd(joint).rho - 0.5))
        assert errors[0] > errors[1] > errors[2]

    def test_rejects_bad_parameters(self):
        with pytest.raises(InvalidRho):
            mx.discretize_bivariate_gaussian(1.0)
        with pytest.raises(ValidationError):
            mx.discretize_bivariate_gaussian(0.5, grid_n=8)
        with pytest.raises(ValidationError):
            mx.discretize_bivariate_gaussian(0.5, half_width=-1.0)
