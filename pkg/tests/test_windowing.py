import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import make_series
from featad.errors import WindowLargerThanSeries
from featad.windowing import slice_series, window_count


def test_window_count_examples():
    assert window_count(8, 4, 1) == 5
    assert window_count(8, 4, 4) == 2
    with pytest.raises(WindowLargerThanSeries):
        window_count(3, 4, 1)


def test_slice_examples():
    wm = slice_series(make_series([1, 2, 3, 4, 5]), 3, 1)
    assert wm.rows.tolist() == [[1, 2, 3], [2, 3, 4], [3, 4, 5]]
    assert wm.window_labels is None
    wm = slice_series(make_series(np.arange(5), [0, 0, 1, 0, 0]), 2, 1)
    assert wm.window_labels.tolist() == [0, 1, 1, 0]
    wm = slice_series(make_series(np.arange(9), np.zeros(9, dtype=int)), 3, 2)
    assert wm.window_labels.tolist() == [0, 0, 0, 0]
    assert wm.window_start_indices.tolist() == [0, 2, 4, 6]


def test_slice_too_long():
    with pytest.raises(WindowLargerThanSeries):
        slice_series(make_series(np.arange(30.0)), 32)


def check_against_oracle(m, W, alpha, rng):
    values = rng.normal(size=m)
    labels = (rng.random(m) < 0.05).astype(int)
    wm = slice_series(make_series(values, labels), W, alpha)
    F = (m - W) // alpha + 1
    assert wm.n_windows == F == window_count(m, W, alpha)
    for i in range(F):
        start = i * alpha
        assert wm.window_start_indices[i] == start
        assert np.array_equal(wm.rows[i], values[start : start + W])
        assert wm.window_labels[i] == int(any(labels[start : start + W]))


def test_random_cases_match_direct_slicing(rng):
    for _ in range(1000):
        m = int(rng.integers(1, 300))
        W = int(rng.integers(1, m + 1))
        alpha = int(rng.integers(1, 40))
        check_against_oracle(m, W, alpha, rng)


@settings(max_examples=100, deadline=None)
@given(st.lists(st.floats(-1e9, 1e9), min_size=1, max_size=80), st.data())
def test_reconstruction(values, data):
    W = data.draw(st.integers(1, len(values)))
    wm = slice_series(make_series(values), W, 1)
    rebuilt = np.concatenate([wm.rows[:, 0], wm.rows[-1, 1:]])
    assert np.array_equal(rebuilt, np.asarray(values))


@settings(max_examples=100, deadline=None)
@given(st.integers(10, 120), st.data())
def test_label_monotonicity(m, data):
    pos = data.draw(st.integers(0, m - 1))
    labels = np.zeros(m, dtype=int)
    labels[pos] = 1
    ts = make_series(np.zeros(m), labels)
    # away from the series ends, so no covering window is cut off by the boundary
    widths = range(1, min(pos + 1, m - pos) + 1)
    covering = [int(slice_series(ts, W).window_labels.sum()) for W in widths]
    assert all(a <= b for a, b in zip(covering, covering[1:]))
