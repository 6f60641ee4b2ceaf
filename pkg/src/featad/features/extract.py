"""Window-by-feature table construction and non-finite column pruning."""

from __future__ import annotations

import csv
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Sequence

import numpy as np

from featad.errors import AllColumnsDropped, EmptyCatalog
from featad.features.catalog import FeatureDescriptor
from featad.features.kernels import WindowBatch, get_kernel
from featad.windowing import WindowMatrix

# rows per batch; bounded so batches of W=256 windows stay a few MB each
DEFAULT_CHUNK_ROWS = 1024


@dataclass(frozen=True, eq=False)
class FeatureMatrix:
    """F x q table of constructed features, columns in catalog order."""

    series_id: str
    window_size: int
    rows: np.ndarray
    columns: tuple[FeatureDescriptor, ...]
    dropped_columns: tuple[FeatureDescriptor, ...] = ()
    window_start_indices: np.ndarray | None = None
    window_labels: np.ndarray | None = None

    @property
    def column_names(self) -> list[str]:
        return [d.column_name for d in self.columns]

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows.shape


def compute_feature(d: FeatureDescriptor, window: Sequence[float]) -> float:
    """Value of a single feature on a single window."""
    batch = WindowBatch(np.asarray(window, dtype=np.float64)[None, :])
    return float(get_kernel(d.name)(batch, **d.kwargs)[0])


def _compute_block(X: np.ndarray, catalog: Sequence[FeatureDescriptor]) -> np.ndarray:
    batch = WindowBatch(X)
    out = np.empty((X.shape[0], len(catalog)))
    for j, d in enumerate(catalog):
        out[:, j] = get_kernel(d.name)(batch, **d.kwargs)
    return out


def extract(
    wm: WindowMatrix,
    catalog: Sequence[FeatureDescriptor],
    n_jobs: int = 1,
    chunk_rows: int = DEFAULT_CHUNK_ROWS,
) -> FeatureMatrix:
    """Evaluate every catalog feature on every window, without pruning.

    Rows are processed in fixed-size chunks; ``n_jobs > 1`` evaluates chunks
    on a thread pool. Values do not depend on ``n_jobs`` or ``chunk_rows``.
    """
    catalog = tuple(catalog)
    if not catalog:
        raise EmptyCatalog("feature catalog is empty")
    for d in catalog:
        get_kernel(d.name)

    X = wm.rows
    starts = range(0, X.shape[0], max(1, chunk_rows))
    blocks = [X[s : s + chunk_rows] for s in starts]
    if n_jobs > 1 and len(blocks) > 1:
        with ThreadPoolExecutor(max_workers=n_jobs) as pool:
            parts = list(pool.map(lambda blk: _compute_block(blk, catalog), blocks))
    else:
        parts = [_compute_block(blk, catalog) for blk in blocks]
    rows = np.vstack(parts) if parts else np.empty((0, len(catalog)))

    return FeatureMatrix(
        series_id=wm.series_id,
        window_size=wm.window_size,
        rows=rows,
        columns=catalog,
        window_start_indices=wm.window_start_indices,
        window_labels=wm.window_labels,
    )


def prune(fm: FeatureMatrix) -> FeatureMatrix:
    """Drop every column holding at least one non-finite value."""
    finite = np.isfinite(fm.rows).all(axis=0)
    if not finite.any():
        raise AllColumnsDropped(
            f"all {len(fm.columns)} feature columns of {fm.series_id!r} contain non-finite values"
        )
    if finite.all():
        return fm
    kept = tuple(d for d, ok in zip(fm.columns, finite) if ok)
    dropped = fm.dropped_columns + tuple(d for d, ok in zip(fm.columns, finite) if not ok)
    return replace(fm, rows=fm.rows[:, finite], columns=kept, dropped_columns=dropped)


def write_feature_csv(fm: FeatureMatrix, path: str | Path) -> None:
    """Export as CSV: ``window_start_index`` then one column per descriptor."""
    starts = fm.window_start_indices
    if starts is None:
        starts = np.arange(fm.rows.shape[0])
    with Path(path).open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["window_start_index", *fm.column_names])
        for start, row in zip(starts, fm.rows):
            writer.writerow([int(start), *(repr(float(v)) for v in row)])


def read_matrix_csv(path: str | Path) -> tuple[np.ndarray, np.ndarray, list[str]]:
    """Read a CSV written by ``write_feature_csv`` (or any window table in that layout).

    Returns (window_start_indices, matrix, column_names).
    """
    with Path(path).open(newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        body = [row for row in reader if row]
    if not header or header[0] != "window_start_index":
        raise ValueError(f"{path}: first column must be window_start_index")
    starts = np.array([int(r[0]) for r in body], dtype=np.int64)
    matrix = np.array([[float(v) for v in r[1:]] for r in body], dtype=np.float64)
    return starts, matrix.reshape(len(body), len(header) - 1), header[1:]
