import numpy as np
import pytest

from lof_oracle import lof_reference, neighborhoods_reference
from featad.detectors import lof_score, lof_values
from featad.detectors.lof import k_neighborhoods
from featad.errors import NonFiniteInput, TooFewRows


def random_instance(rng):
    F = int(rng.integers(6, 101))
    d = int(rng.integers(1, 11))
    k = int(rng.integers(1, min(F - 1, 25) + 1))
    if rng.random() < 0.3:
        # small integer grid: many exact distance ties and duplicates
        X = rng.integers(0, 4, size=(F, d)).astype(float)
    else:
        X = rng.normal(size=(F, d)) * rng.uniform(0.1, 10)
    return X, k


def check_against_reference(X, k):
    """Neighborhoods and scores must agree with the reference bit for bit."""
    want_hoods, want = neighborhoods_reference(X, k), lof_reference(X, k)
    nb = k_neighborhoods(X, k)
    assert [sorted(nb.of(i).tolist()) for i in range(X.shape[0])] == want_hoods
    assert lof_values(X, k).tolist() == want


def test_matches_brute_force_reference():
    rng = np.random.default_rng(7)
    for _ in range(200):
        check_against_reference(*random_instance(rng))


def test_kdtree_path_matches_brute(rng):
    for _ in range(50):
        X, k = random_instance(rng)
        a, b = k_neighborhoods(X, k, "kdtree"), k_neighborhoods(X, k, "brute")
        assert a.indptr.tolist() == b.indptr.tolist() and a.indices.tolist() == b.indices.tolist()
        assert lof_values(X, k, "kdtree").tolist() == lof_values(X, k, "brute").tolist()


def test_neighborhood_keeps_ties():
    X = np.array([[0.0], [1.0], [-1.0], [5.0]])
    nb = k_neighborhoods(X, 1)
    assert sorted(nb.of(0).tolist()) == [1, 2]


def test_duplicates_have_lof_one():
    X = np.vstack([np.ones((25, 3)), [[5.0, 5.0, 5.0]]])
    lof = lof_values(X, k=20)
    assert np.all(lof[:25] == 1.0)


def test_grid_plus_outlier():
    X = np.array([[float(v)] for v in list(range(10)) + [100]])
    lof = lof_values(X, k=3)
    assert lof[10] > 3
    assert int(np.argmax(lof)) == 10
    assert np.all((lof[1:9] >= 0.8) & (lof[1:9] <= 1.3))


def test_cluster_plus_outlier(rng):
    X = np.vstack([rng.normal(size=(100, 4)) * 0.1, [[5, 5, 5, 5]]])
    assert int(np.argmax(lof_score(X).scores)) == 100


def test_column_permutation_invariance(rng):
    for _ in range(20):
        X, k = random_instance(rng)
        perm = rng.permutation(X.shape[1])
        np.testing.assert_allclose(lof_values(X[:, perm], k), lof_values(X, k), rtol=1e-12)


def test_errors():
    with pytest.raises(TooFewRows):
        lof_values(np.zeros((20, 2)), k=20)
    X = np.zeros((30, 2))
    X[3, 1] = np.nan
    with pytest.raises(NonFiniteInput):
        lof_values(X, k=5)


def test_score_vector_metadata(rng):
    sv = lof_score(rng.normal(size=(30, 2)), k=5)
    assert sv.detector_id == "LOF" and len(sv) == 30 and np.isfinite(sv.scores).all()
    assert sv.params_digest != lof_score(rng.normal(size=(30, 2)), k=6).params_digest
