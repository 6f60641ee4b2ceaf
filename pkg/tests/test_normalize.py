import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from conftest import make_series
from featad.errors import UnknownMethod
from featad.features import FeatureMatrix
from featad.normalize import ROW_METHODS, normalize_array, normalize_feature_columns, normalize_rows
from featad.windowing import slice_series


def naive_row(x, method):
    x = [float(v) for v in x]
    n = len(x)
    s = sorted(x)

    def q(p):
        h = (n - 1) * p
        lo = int(h)
        hi = min(lo + 1, n - 1)
        return s[lo] + (s[hi] - s[lo]) * (h - lo)

    if method == "none":
        return x
    if method == "minmax":
        center, spread = s[0], s[-1] - s[0]
    elif method == "median_iqr":
        center, spread = q(0.5), q(0.75) - q(0.25)
    else:
        center = sum(x) / n
        spread = (sum((v - center) ** 2 for v in x) / n) ** 0.5
    if spread == 0:
        return [0.0] * n
    return [(v - center) / spread for v in x]


def test_examples():
    assert normalize_array(np.array([[2.0, 4, 6]]), "minmax").tolist() == [[0, 0.5, 1]]
    np.testing.assert_allclose(
        normalize_array(np.array([[1.0, 2, 3]]), "mean_std")[0], [-1.224744871391589, 0, 1.224744871391589], rtol=1e-12
    )
    for method in ROW_METHODS[1:]:
        assert normalize_array(np.array([[5.0, 5, 5]]), method).tolist() == [[0, 0, 0]]


def test_hyphenated_names_and_unknown():
    wm = slice_series(make_series([1, 2, 3, 4]), 2)
    assert np.array_equal(normalize_rows(wm, "median-iqr").rows, normalize_rows(wm, "median_iqr").rows)
    with pytest.raises(UnknownMethod):
        normalize_rows(wm, "zscore")


def test_labels_and_metadata_unchanged():
    wm = slice_series(make_series(np.arange(10.0), [0] * 9 + [1]), 4)
    out = normalize_rows(wm, "minmax")
    assert np.array_equal(out.window_labels, wm.window_labels)
    assert np.array_equal(out.window_start_indices, wm.window_start_indices)
    assert out.series_id == wm.series_id and out.window_size == wm.window_size


def test_matches_naive_oracle(rng):
    X = np.vstack([rng.normal(size=(200, 9)), rng.integers(0, 3, size=(100, 9)).astype(float)])
    for method in ROW_METHODS:
        got = normalize_array(X, method)
        want = np.array([naive_row(r, method) for r in X])
        np.testing.assert_allclose(got, want, rtol=1e-12, atol=1e-12)


rows_strategy = arrays(np.float64, st.tuples(st.integers(1, 20), st.integers(2, 12)), elements=st.floats(-1e6, 1e6))


@settings(max_examples=100, deadline=None)
@given(rows_strategy, st.sampled_from(ROW_METHODS), st.randoms(use_true_random=False))
def test_row_independence(X, method, rnd):
    perm = list(range(X.shape[0]))
    rnd.shuffle(perm)
    assert np.array_equal(normalize_array(X, method)[perm], normalize_array(X[perm], method))


@settings(max_examples=100, deadline=None)
@given(rows_strategy)
def test_minmax_range_and_mean_std_moments(X):
    mm = normalize_array(X, "minmax")
    assert mm.min() >= 0.0 and mm.max() <= 1.0
    z = normalize_array(X, "mean_std")
    ok = X.std(axis=1) > 1e-6 * np.abs(X).max(axis=1).clip(1)
    assert np.all(np.abs(z[ok].mean(axis=1)) < 1e-10)
    np.testing.assert_allclose(z[ok].var(axis=1), 1.0, rtol=1e-9)


def fm_of(rows):
    rows = np.asarray(rows, dtype=float)
    return FeatureMatrix(series_id="s", window_size=4, rows=rows, columns=(), dropped_columns=())


def test_feature_columns():
    out = normalize_feature_columns(fm_of([[1, 7], [3, 7]]))
    assert out.rows.tolist() == [[-1, 0], [1, 0]]
    z = np.array([[-1.0], [1.0], [0.0]]) * np.sqrt(1.5)
    np.testing.assert_allclose(normalize_feature_columns(fm_of(z)).rows, z, atol=1e-12)
