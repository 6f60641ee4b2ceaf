"""Loading, validation and curation of labeled univariate series."""

from __future__ import annotations

import csv
import math
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from featad.errors import (
    BadFilenameConvention,
    BadLabel,
    DegenerateSeries,
    EmptySeries,
    IndicesOutOfRange,
    MissingColumn,
    MissingLabels,
    NonFiniteValue,
    TooShort,
)

_UCR_NAME = re.compile(r"_(\d+)_(\d+)_(\d+)$")


@dataclass(frozen=True, eq=False)
class TimeSeries:
    """An immutable univariate series with optional point labels.

    Attributes:
        id: Identifier, unique within a dataset.
        values: Float array of length m, all finite.
        labels: Optional int8 array of length m with 1 marking anomalous points.
        source: Path the series was read from ("" for in-memory series).
        sampling_rate: Informational only, in Hz.
        metadata: Free-form loader metadata (e.g. the UCR training-end index).
    """

    id: str
    values: np.ndarray
    labels: np.ndarray | None = None
    source: str = ""
    sampling_rate: float | None = None
    metadata: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        values = np.array(self.values, dtype=np.float64).ravel()
        if values.size == 0:
            raise EmptySeries(f"series {self.id!r} has no values")
        bad = np.flatnonzero(~np.isfinite(values))
        if bad.size:
            raise NonFiniteValue(int(bad[0]))
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

        if self.labels is not None:
            labels = np.asarray(self.labels)
            if labels.shape != values.shape:
                raise BadLabel(
                    min(labels.size, values.size),
                    f"labels length {labels.size} != values length {values.size}",
                )
            ok = (labels == 0) | (labels == 1)
            if not ok.all():
                raise BadLabel(int(np.flatnonzero(~ok)[0]))
            labels = labels.astype(np.int8)
            labels.setflags(write=False)
            object.__setattr__(self, "labels", labels)

    def __len__(self) -> int:
        return self.values.size

    @property
    def m(self) -> int:
        return self.values.size


def _parse_value(text: str, row: int) -> float:
    try:
        value = float(text)
    except ValueError:
        raise NonFiniteValue(row, f"unparseable value {text!r} at row {row}") from None
    if not math.isfinite(value):
        raise NonFiniteValue(row)
    return value


def _parse_label(text: str, row: int) -> int:
    text = text.strip()
    try:
        number = float(text)
    except ValueError:
        raise BadLabel(row, f"unparseable label {text!r} at row {row}") from None
    if number not in (0.0, 1.0):
        raise BadLabel(row, f"label {text!r} at row {row} is not 0/1")
    return int(number)


def load_csv(
    path: str | Path,
    value_column: str = "value",
    label_column: str | None = "label",
    series_id: str | None = None,
) -> TimeSeries:
    """Read a series from a headered CSV file.

    Row order is taken as temporal order. Rows are numbered from 0, counting
    data rows only (the header is not a row).

    Raises:
        MissingColumn: a requested column is absent from the header.
        NonFiniteValue: a value is NaN/inf or not a number.
        BadLabel: a label is anything other than 0 or 1.
        EmptySeries: the file has no data rows.
    """
    path = Path(path)
    with path.open(newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        header = reader.fieldnames or []
        for col in (value_column, label_column):
            if col is not None and col not in header:
                raise MissingColumn(f"column {col!r} not in {path.name} header {header}")
        values: list[float] = []
        labels: list[int] = []
        for row, rec in enumerate(reader):
            values.append(_parse_value(rec[value_column], row))
            if label_column is not None:
                labels.append(_parse_label(rec[label_column], row))
    if not values:
        raise EmptySeries(f"{path} contains no data rows")
    return TimeSeries(
        id=series_id or path.stem,
        values=np.array(values),
        labels=np.array(labels, dtype=np.int8) if label_column is not None else None,
        source=str(path),
    )


def save_csv(ts: TimeSeries, path: str | Path, value_column: str = "value", label_column: str = "label") -> None:
    """Write ``ts`` in the layout ``load_csv`` reads back losslessly."""
    path = Path(path)
    with path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        if ts.labels is None:
            writer.writerow([value_column])
            writer.writerows([repr(float(v))] for v in ts.values)
        else:
            writer.writerow([value_column, label_column])
            writer.writerows(
                [repr(float(v)), int(lab)] for v, lab in zip(ts.values, ts.labels)
            )


def parse_ucr_name(name: str) -> tuple[int, int, int]:
    """Return (training_end, anomaly_begin, anomaly_end) from a UCR filename.

    The last three underscore-separated integers before the extension carry
    the indices, 1-based and inclusive.
    """
    match = _UCR_NAME.search(Path(name).stem)
    if match is None:
        raise BadFilenameConvention(
            f"{name!r} does not end with _<train_end>_<begin>_<end> before the extension"
        )
    train_end, begin, end = (int(g) for g in match.groups())
    return train_end, begin, end


def load_ucr(path: str | Path) -> TimeSeries:
    """Read a UCR Anomaly Archive file and synthesize point labels.

    Labels are 1 on the 1-based inclusive interval ``[begin, end]`` encoded
    in the filename. The training-end index is kept in ``metadata`` only.
    """
    path = Path(path)
    train_end, begin, end = parse_ucr_name(path.name)
    if begin < 1 or begin > end:
        raise IndicesOutOfRange(f"{path.name}: anomaly interval [{begin}, {end}] is empty or invalid")

    values: list[float] = []
    with path.open(encoding="utf-8") as fh:
        for line in fh:
            # a handful of archive files pack several whitespace-separated values per line
            for token in line.split():
                values.append(_parse_value(token, len(values)))
    if not values:
        raise EmptySeries(f"{path} contains no values")
    m = len(values)
    if end > m:
        raise IndicesOutOfRange(f"{path.name}: anomaly end {end} exceeds series length {m}")

    labels = np.zeros(m, dtype=np.int8)
    labels[begin - 1 : end] = 1
    return TimeSeries(
        id=path.stem,
        values=np.array(values),
        labels=labels,
        source=str(path),
        metadata={"training_end": train_end, "anomaly_begin": begin, "anomaly_end": end},
    )


def contamination_rate(ts: TimeSeries) -> float:
    """Fraction of points labeled anomalous."""
    if ts.labels is None:
        raise MissingLabels(f"series {ts.id!r} has no labels")
    return float(np.count_nonzero(ts.labels)) / ts.m


def _unit_scaled(c: np.ndarray) -> np.ndarray:
    # r is scale-free; rescaling keeps squares of tiny deviations from underflowing
    peak = float(np.abs(c).max())
    return c / peak if peak > 0 else c


def pearson_correlation(a: TimeSeries, b: TimeSeries) -> float:
    """Product-moment correlation over the common prefix of two series."""
    length = min(a.m, b.m)
    if length < 2:
        raise TooShort(f"common length {length} < 2")
    x = _unit_scaled(a.values[:length] - a.values[:length].mean())
    y = _unit_scaled(b.values[:length] - b.values[:length].mean())
    sxx = float(np.dot(x, x))
    syy = float(np.dot(y, y))
    if sxx == 0.0 or syy == 0.0:
        raise DegenerateSeries(f"constant series among {a.id!r}, {b.id!r}")
    r = float(np.dot(x, y)) / math.sqrt(sxx * syy)
    return max(-1.0, min(1.0, r))


def curate(
    collection: Sequence[TimeSeries],
    max_contamination: float = 0.5,
    corr_threshold: float = 0.3,
) -> list[TimeSeries]:
    """Drop over-contaminated series, then greedily drop correlated ones.

    The correlation pass scans in input order and keeps a series only when
    ``|r| < corr_threshold`` against every series kept so far. A constant
    series cannot be correlated and is compared as ``r = 0``.
    """
    clean = [ts for ts in collection if contamination_rate(ts) <= max_contamination]
    kept: list[TimeSeries] = []
    for ts in clean:
        if all(abs(_safe_corr(ts, other)) < corr_threshold for other in kept):
            kept.append(ts)
    return kept


def _safe_corr(a: TimeSeries, b: TimeSeries) -> float:
    try:
        return pearson_correlation(a, b)
    except (DegenerateSeries, TooShort):
        return 0.0
