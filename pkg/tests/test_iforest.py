import math

import numpy as np
import pytest

from featad.detectors import IsolationTree, average_path_length, if_fit, if_score
from featad.detectors.iforest import if_mean_path_length
from featad.errors import DegenerateInput, DimensionMismatch, NonFiniteInput


def c_reference(n):
    if n <= 1:
        return 0.0
    if n == 2:
        return 1.0
    return 2.0 * (math.log(n - 1) + 0.5772156649) - 2.0 * (n - 1) / n


def test_average_path_length():
    assert average_path_length(256) == pytest.approx(10.2448, abs=1e-3)
    for n in [0, 1, 2, 3, 10, 255, 256, 10_000]:
        assert average_path_length(n) == pytest.approx(c_reference(n), rel=1e-15)
    np.testing.assert_allclose(average_path_length(np.arange(6)), [c_reference(n) for n in range(6)])


def cluster_plus_outlier(seed):
    rng = np.random.default_rng(seed)
    return np.vstack([rng.normal(size=(100, 2)) * 0.1, [[3.0, 3.0]]])


def test_outlier_scores_highest_seed_42():
    X = cluster_plus_outlier(42)
    s = if_score(if_fit(X, seed=42), X).scores
    assert int(np.argmax(s)) == 100
    assert s[100] > np.delete(s, 100).max()


def test_outlier_scores_highest_over_seeds():
    hits = 0
    for seed in range(100):
        X = cluster_plus_outlier(seed)
        s = if_score(if_fit(X, seed=seed), X).scores
        hits += int(np.argmax(s)) == 100 and s[100] > np.delete(s, 100).max()
    assert hits >= 99


def test_scores_in_open_unit_interval(rng):
    X = rng.normal(size=(300, 5))
    s = if_score(if_fit(X, seed=1), X).scores
    assert np.all((s > 0) & (s < 1))


def test_identical_rows():
    X = np.ones((10, 3))
    model = if_fit(X, seed=3)
    assert all(t.n_nodes == 1 and t.size[0] == 10 for t in model.trees)
    s = if_score(model, X).scores
    assert np.all(s == s[0])


def test_tree_invariants(rng):
    X = np.vstack([rng.normal(size=(400, 3)), rng.integers(0, 2, size=(100, 3))])
    model = if_fit(X, T=30, seed=5)
    assert model.subsample_size == 256
    limit = math.ceil(math.log2(256))
    for tree in model.trees:
        assert tree.max_depth <= limit
        assert tree.size[0] == 256
        internal = np.flatnonzero(tree.feature >= 0)
        for node in internal:
            assert tree.size[node] == tree.size[tree.left[node]] + tree.size[tree.right[node]]
            assert tree.size[tree.left[node]] > 0 and tree.size[tree.right[node]] > 0


def test_thresholds_strictly_inside_node_range(rng):
    X = rng.integers(0, 3, size=(64, 2)).astype(float)
    model = if_fit(X, T=20, psi=64, seed=9)
    for tree in model.trees:
        # replay the subsample through the tree to recover each node's rows
        rows = {0: X}
        for node in range(tree.n_nodes):
            sub = rows.get(node)
            if tree.feature[node] < 0 or sub is None:
                continue
            q, t = tree.feature[node], tree.threshold[node]
            assert sub[:, q].min() < t < sub[:, q].max()
            rows[tree.left[node]] = sub[sub[:, q] < t]
            rows[tree.right[node]] = sub[sub[:, q] >= t]


def test_adjacent_float_feature_terminates():
    lo = 1.0
    hi = np.nextafter(lo, 2.0)
    X = np.array([[lo], [hi]] * 8)
    model = if_fit(X, T=5, seed=0)
    assert all(t.n_nodes == 1 for t in model.trees)


def test_same_seed_same_trees(rng):
    X = rng.normal(size=(200, 4))
    a, b = if_fit(X, seed=11), if_fit(X, seed=11)
    assert a.trees == b.trees
    assert if_fit(X, seed=12).trees != a.trees


def test_thread_count_does_not_change_scores(rng):
    X = rng.normal(size=(500, 6))
    ref = if_score(if_fit(X, seed=7, n_jobs=1), X).scores.tobytes()
    for jobs in (2, 4, 8):
        assert if_score(if_fit(X, seed=7, n_jobs=jobs), X).scores.tobytes() == ref


def test_deeper_paths_score_lower():
    # one split at 0.5: rows left of it end at depth 1 in a size-1 leaf,
    # rows right of it end at depth 1 in a size-3 leaf (longer expected path)
    tree = IsolationTree(
        feature=np.array([0, -1, -1]),
        threshold=np.array([0.5, np.nan, np.nan]),
        left=np.array([1, -1, -1]),
        right=np.array([2, -1, -1]),
        size=np.array([4, 1, 3]),
        depth=np.array([0, 1, 1]),
    )
    h = tree.path_lengths(np.array([[0.0], [1.0]]))
    assert h.tolist() == [1.0, 1.0 + c_reference(3)]


def test_column_permutation_distribution(rng):
    X = np.vstack([rng.normal(size=(150, 4)), rng.normal(size=(5, 4)) * 4])
    perm = rng.permutation(4)
    shift = []
    for seed in range(50):
        a = if_score(if_fit(X, seed=seed), X).scores.mean()
        b = if_score(if_fit(X[:, perm], seed=seed), X[:, perm]).scores.mean()
        shift.append(a - b)
    assert abs(np.mean(shift)) < 0.01


def test_errors(rng):
    with pytest.raises(DegenerateInput):
        if_fit(np.zeros((1, 3)))
    X = rng.normal(size=(20, 2))
    X[4, 0] = np.inf
    with pytest.raises(NonFiniteInput):
        if_fit(X)
    model = if_fit(rng.normal(size=(20, 2)))
    with pytest.raises(DimensionMismatch):
        if_score(model, rng.normal(size=(5, 3)))


def test_small_subsample(rng):
    X = rng.normal(size=(10, 2))
    model = if_fit(X, T=10, seed=0)
    assert model.subsample_size == 10
    h = if_mean_path_length(model, X)
    assert np.all(h > 0)
