import numpy as np
import pytest

from oracles import power_iteration_eigh
from ovisat.errors import DegenerateData, ShapeMismatch, TooManyComponents
from ovisat.pca import fit_pca, inverse_transform, transform


def random_matrix(seed, n=20, d=5, scale=None):
    rng = np.random.default_rng(seed)
    X = rng.normal(size=(n, d))
    if scale is not None:
        X = X * scale
    return X


class TestFitPca:
    def test_rank_one_line(self):
        t = np.linspace(-2.0, 2.0, 9)
        X = np.column_stack([t, t])
        m = fit_pca(X, 1)
        assert np.allclose(m.components[0], [np.sqrt(0.5), np.sqrt(0.5)], atol=1e-10)
        share = m.explained_variance[0] / np.var(X, axis=0, ddof=1).sum()
        assert share == pytest.approx(1.0, abs=1e-10)

    def test_degenerate_data(self):
        X = np.tile([1.0, 2.0, 3.0], (6, 1))
        with pytest.raises(DegenerateData):
            fit_pca(X, 1)

    def test_too_many_components(self):
        with pytest.raises(TooManyComponents):
            fit_pca(random_matrix(0, n=4, d=5), 4)  # limit is min(3, 5)

    def test_against_power_iteration_oracle(self):
        X = random_matrix(42)
        m = fit_pca(X, 5)
        cov = np.cov(X, rowvar=False, ddof=1)
        # components diagonalize the covariance
        D = m.components @ cov @ m.components.T
        off = D - np.diag(np.diag(D))
        assert np.max(np.abs(off)) < 1e-8
        vals, vecs = power_iteration_eigh(cov, 5)
        assert np.allclose(np.sort(vals)[::-1], m.explained_variance, atol=1e-8)
        for i in range(5):
            assert abs(abs(vecs[i] @ m.components[i]) - 1.0) < 1e-6

    def test_orthonormal_components(self):
        m = fit_pca(random_matrix(7, n=30, d=8), 6)
        G = m.components @ m.components.T
        assert np.max(np.abs(G - np.eye(6))) < 1e-10

    def test_explained_variance_ordering_and_total(self):
        X = random_matrix(3, n=25, d=6)
        m = fit_pca(X, 6)
        ev = m.explained_variance
        assert np.all(np.diff(ev) <= 1e-12)
        assert np.all(ev >= -1e-12)
        assert np.sum(ev) == pytest.approx(
            np.var(X, axis=0, ddof=1).sum(), abs=1e-8
        )

    def test_sign_convention(self):
        m = fit_pca(random_matrix(11), 5)
        for row in m.components:
            assert row[np.argmax(np.abs(row))] > 0

    def test_deterministic_bitwise(self):
        X = random_matrix(5)
        a = fit_pca(X, 4)
        b = fit_pca(X, 4)
        assert np.array_equal(a.components, b.components)
        assert np.array_equal(a.explained_variance, b.explained_variance)

    def test_scale_independent_convergence(self):
        # large-scale covariance should converge as cleanly as unit scale
        m = fit_pca(random_matrix(9, scale=1e6), 4)
        G = m.components @ m.components.T
        assert np.max(np.abs(G - np.eye(4))) < 1e-10


class TestTransform:
    def test_mean_row_maps_to_zero(self):
        X = random_matrix(1)
        m = fit_pca(X, 3)
        z = transform(m, X.mean(axis=0)[None, :])
        assert np.max(np.abs(z)) < 1e-12

    def test_one_component_on_1d_data(self):
        X = np.array([[1.0], [3.0], [5.0], [7.0]])
        m = fit_pca(X, 1)
        z = transform(m, X)
        assert np.allclose(z.ravel(), X.ravel() - 4.0, atol=1e-10)

    def test_uncorrelated_scores(self):
        X = random_matrix(13, n=40, d=6)
        m = fit_pca(X, 6)
        Z = transform(m, X)
        cov = np.cov(Z, rowvar=False, ddof=1)
        off = cov - np.diag(np.diag(cov))
        assert np.max(np.abs(off)) < 1e-8

    def test_shape_mismatch(self):
        m = fit_pca(random_matrix(2), 2)
        with pytest.raises(ShapeMismatch):
            transform(m, np.zeros((3, 4)))


class TestInverseTransform:
    def test_zero_scores_give_means(self):
        X = random_matrix(4)
        m = fit_pca(X, 3)
        out = inverse_transform(m, np.zeros((1, 3)))
        assert np.allclose(out[0], m.means, atol=1e-12)

    def test_full_rank_round_trip(self):
        X = random_matrix(8)
        m = fit_pca(X, 5)
        back = inverse_transform(m, transform(m, X))
        assert np.max(np.abs(back - X)) < 1e-8

    def test_truncated_round_trip_is_projection(self):
        X = random_matrix(6)
        m = fit_pca(X, 2)
        back = inverse_transform(m, transform(m, X))
        residual = X - back
        # residual orthogonal to the retained components
        dots = residual @ m.components.T
        assert np.max(np.abs(dots)) < 1e-8

    def test_shape_mismatch(self):
        m = fit_pca(random_matrix(2), 2)
        with pytest.raises(ShapeMismatch):
            inverse_transform(m, np.zeros((3, 4)))
