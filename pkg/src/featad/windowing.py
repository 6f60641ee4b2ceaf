"""Sliding-window tabularization of a series into an F x W matrix."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from featad.errors import WindowLargerThanSeries
from featad.series_io import TimeSeries


@dataclass(frozen=True, eq=False)
class WindowMatrix:
    """Windows of one series stacked as rows.

    ``rows[i]`` is ``values[i * stride : i * stride + window_size]``. Trailing
    points that do not fill a whole window are discarded.
    """

    series_id: str
    window_size: int
    stride: int
    rows: np.ndarray
    window_start_indices: np.ndarray
    window_labels: np.ndarray | None = None

    @property
    def n_windows(self) -> int:
        return self.rows.shape[0]

    def with_rows(self, rows: np.ndarray) -> "WindowMatrix":
        return WindowMatrix(
            series_id=self.series_id,
            window_size=self.window_size,
            stride=self.stride,
            rows=rows,
            window_start_indices=self.window_start_indices,
            window_labels=self.window_labels,
        )


def window_count(m: int, W: int, stride: int = 1) -> int:
    """Number of full windows of size ``W`` advanced by ``stride`` over ``m`` points."""
    if W < 1 or stride < 1:
        raise ValueError(f"window size and stride must be >= 1, got W={W}, stride={stride}")
    if W > m:
        raise WindowLargerThanSeries(f"window size {W} exceeds series length {m}")
    return (m - W) // stride + 1


def slice_series(ts: TimeSeries, W: int, stride: int = 1) -> WindowMatrix:
    """Cut ``ts`` into windows; a window is anomalous iff it holds an anomalous point."""
    F = window_count(ts.m, W, stride)
    starts = np.arange(F, dtype=np.int64) * stride
    # copy: downstream stages must not alias the series buffer
    rows = np.ascontiguousarray(sliding_window_view(ts.values, W)[::stride][:F])

    window_labels = None
    if ts.labels is not None:
        # prefix sums give the anomalous-point count of every window in O(m)
        csum = np.concatenate(([0], np.cumsum(ts.labels, dtype=np.int64)))
        window_labels = (csum[starts + W] - csum[starts] > 0).astype(np.int8)

    return WindowMatrix(
        series_id=ts.id,
        window_size=W,
        stride=stride,
        rows=rows,
        window_start_indices=starts,
        window_labels=window_labels,
    )
