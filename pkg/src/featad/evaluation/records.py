"""Result and skip records and their CSV layouts."""

from __future__ import annotations

import csv
from dataclasses import asdict, dataclass, fields
from pathlib import Path
from typing import Iterable

REPRESENTATIONS = ("TS", "FE")
DETECTORS = ("IF", "LOF")


@dataclass(frozen=True)
class ResultRecord:
    """One evaluation outcome.

    ``runtime_ms`` is wall-clock and therefore excluded from the results CSV,
    which must be byte-reproducible; it goes to a separate timings file.
    """

    dataset: str
    series_id: str
    window_size: int
    representation: str
    detector: str
    normalization: str
    auc: float
    n_windows: int
    seed: int
    runtime_ms: int = 0

    @property
    def key(self) -> tuple:
        return (
            self.dataset, self.series_id, self.window_size, self.representation,
            self.detector, self.normalization, self.seed,
        )

    @property
    def method(self) -> str:
        return f"{self.representation}-{self.detector}"


@dataclass(frozen=True)
class SkipRecord:
    dataset: str
    series_id: str
    window_size: int | None
    representation: str
    detector: str
    normalization: str
    reason: str
    detail: str = ""


RESULT_COLUMNS = [f.name for f in fields(ResultRecord) if f.name != "runtime_ms"]
SKIP_COLUMNS = [f.name for f in fields(SkipRecord)]
TIMING_COLUMNS = ["dataset", "series_id", "window_size", "representation", "detector", "normalization", "runtime_ms"]


def _cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return str(value)


class CsvAppender:
    """Line-buffered CSV writer that appends rows as they are produced."""

    def __init__(self, path: str | Path, columns: list[str]) -> None:
        self.path = Path(path)
        self.columns = columns
        self._fh = self.path.open("w", newline="", encoding="utf-8")
        self._writer = csv.writer(self._fh, lineterminator="\n")
        self._writer.writerow(columns)
        self._fh.flush()

    def write(self, record) -> None:
        row = asdict(record)
        self._writer.writerow([_cell(row[c]) for c in self.columns])
        self._fh.flush()

    def close(self) -> None:
        self._fh.close()

    def __enter__(self) -> "CsvAppender":
        return self

    def __exit__(self, *exc) -> None:
        self.close()


def write_results_csv(records: Iterable[ResultRecord], path: str | Path) -> None:
    with CsvAppender(path, RESULT_COLUMNS) as out:
        for rec in records:
            out.write(rec)


def read_results_csv(path: str | Path) -> list[ResultRecord]:
    with Path(path).open(newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        missing = set(RESULT_COLUMNS) - set(reader.fieldnames or [])
        if missing:
            raise ValueError(f"{path}: missing result columns {sorted(missing)}")
        return [
            ResultRecord(
                dataset=row["dataset"],
                series_id=row["series_id"],
                window_size=int(row["window_size"]),
                representation=row["representation"],
                detector=row["detector"],
                normalization=row["normalization"],
                auc=float(row["auc"]),
                n_windows=int(row["n_windows"]),
                seed=int(row["seed"]),
            )
            for row in reader
        ]
