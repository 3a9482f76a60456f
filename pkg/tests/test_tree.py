import numpy as np
import pytest

from oracles import tree_greedy_sse
from ovisat import pca
from ovisat.models import DtrConfig, fit_dtr, predict
from ovisat.models.tree import _grow


def tree_sse(model, X, y):
    resid = y - predict(model, X)
    return float(resid @ resid)


class TestFitDtr:
    def test_constant_target_single_leaf(self):
        rng = np.random.default_rng(0)
        X = rng.normal(size=(10, 3))
        m = fit_dtr(X, np.full(10, 4.2), DtrConfig(pca_components=2))
        assert m.root.is_leaf
        assert np.all(predict(m, X) == 4.2)

    def test_perfect_bipartition(self):
        X = np.array([[1.0], [2.0], [3.0], [4.0]])
        y = np.array([0.0, 0.0, 10.0, 10.0])
        m = fit_dtr(X, y, DtrConfig(max_depth=1, min_samples_split=2,
                                    pca_components=1))
        assert np.array_equal(predict(m, X), y)
        assert sorted([m.root.left.value, m.root.right.value]) == [0.0, 10.0]

    def test_raw_grow_threshold_midpoint(self):
        # the split lands halfway between the separating values
        X = np.array([[1.0], [2.0], [3.0], [4.0]])
        y = np.array([0.0, 0.0, 10.0, 10.0])
        root = _grow(X, y, depth=0,
                     config=DtrConfig(max_depth=1, min_samples_split=2,
                                      pca_components=1))
        assert root.feature == 0
        assert root.threshold == 2.5

    def test_matches_exhaustive_oracle(self):
        for seed in range(5):
            rng = np.random.default_rng(seed)
            X = rng.normal(size=(10, 3))
            y = rng.normal(size=10)
            cfg = DtrConfig(max_depth=3, min_samples_split=2, pca_components=2)
            m = fit_dtr(X, y, cfg)
            Z = pca.transform(m.projection, X)
            best = tree_greedy_sse(Z, y, 0, cfg.max_depth, cfg.min_samples_split)
            assert tree_sse(m, X, y) == pytest.approx(best, abs=1e-10)

    def test_splits_never_increase_sse(self):
        rng = np.random.default_rng(7)
        X = rng.normal(size=(40, 4))
        y = rng.normal(size=40)
        m = fit_dtr(X, y, DtrConfig())
        root_sse = float(np.sum((y - y.mean()) ** 2))
        assert tree_sse(m, X, y) <= root_sse + 1e-12

    def test_depth_limit_respected(self):
        rng = np.random.default_rng(8)
        X = rng.normal(size=(200, 2))
        y = rng.normal(size=200)
        m = fit_dtr(X, y, DtrConfig(max_depth=3, min_samples_split=2))

        def depth(node):
            if node.is_leaf:
                return 0
            return 1 + max(depth(node.left), depth(node.right))

        assert depth(m.root) <= 3

    def test_min_samples_split_respected(self):
        X = np.array([[1.0], [2.0], [3.0], [4.0]])
        y = np.array([0.0, 1.0, 2.0, 3.0])
        m = fit_dtr(X, y, DtrConfig(max_depth=3, min_samples_split=5,
                                    pca_components=1))
        assert m.root.is_leaf  # 4 rows < min_samples_split

    def test_single_row_is_lone_leaf(self):
        m = fit_dtr(np.array([[1.0, 2.0]]), np.array([3.0]), DtrConfig())
        assert m.root.is_leaf and m.root.value == 3.0
        assert predict(m, np.array([[9.0, 9.0]]))[0] == 3.0

    def test_identical_rows_become_leaf(self):
        X = np.ones((8, 2))
        y = np.arange(8.0)
        m = fit_dtr(X, y, DtrConfig())
        assert m.root.is_leaf
        assert m.root.value == pytest.approx(3.5)

    def test_tie_breaks_lowest_feature_then_threshold(self):
        # two features carry identical copies of the separating value
        X = np.column_stack([[0.0, 0.0, 1.0, 1.0], [0.0, 0.0, 1.0, 1.0]])
        y = np.array([0.0, 0.0, 1.0, 1.0])
        root = _grow(X, y, depth=0,
                     config=DtrConfig(max_depth=1, min_samples_split=2))
        assert root.feature == 0
        assert root.threshold == 0.5

    def test_empty_prediction(self):
        rng = np.random.default_rng(9)
        m = fit_dtr(rng.normal(size=(10, 3)), rng.normal(size=10), DtrConfig())
        assert predict(m, np.empty((0, 3))).shape == (0,)
