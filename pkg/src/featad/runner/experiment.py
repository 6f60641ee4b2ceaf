"""Config-driven execution of the full pipeline over a corpus.

One unit of work is a (series, window size) pair: the windows and, for FE,
the feature table are built once and shared by every normalization,
representation and detector of that pair. Units run on a process pool but
their outputs are consumed in submission order, so result files do not
depend on the degree of parallelism.
"""

from __future__ import annotations

import hashlib
import logging
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterator

import numpy as np

from featad.detectors import if_fit, if_score, lof_score
from featad.errors import FeatadError, MissingLabels
from featad.evaluation.metrics import auc
from featad.evaluation.records import (
    RESULT_COLUMNS,
    SKIP_COLUMNS,
    TIMING_COLUMNS,
    CsvAppender,
    ResultRecord,
    SkipRecord,
)
from featad.features import default_catalog, extract, prune
from featad.normalize import normalize_feature_columns, normalize_rows
from featad.runner.config import DatasetSpec, ExperimentConfig
from featad.series_io import TimeSeries, contamination_rate, curate, load_csv, load_ucr
from featad.windowing import slice_series

log = logging.getLogger(__name__)

RESULTS_FILE = "results.csv"
SKIPS_FILE = "skips.csv"
TIMINGS_FILE = "timings.csv"
CURATED_OUT = "CuratedOut"


def task_seed(seed: int, series_id: str, window_size: int, representation: str, detector: str) -> int:
    """Deterministic 63-bit seed for one (series, W, representation, detector) task."""
    key = f"{seed}|{series_id}|{window_size}|{representation}|{detector}".encode()
    return int.from_bytes(hashlib.sha256(key).digest()[:8], "little") >> 1


@dataclass
class ExperimentRun:
    records: list[ResultRecord] = field(default_factory=list)
    skips: list[SkipRecord] = field(default_factory=list)
    output_dir: Path | None = None

    @property
    def failures(self) -> list[SkipRecord]:
        return [s for s in self.skips if s.reason != CURATED_OUT]


def _series_files(spec: DatasetSpec) -> list[Path]:
    path = Path(spec.path)
    if path.is_dir():
        pattern = "*.csv" if spec.loader == "csv" else "*.txt"
        return sorted(path.glob(pattern))
    return [path]


def _load_one(spec: DatasetSpec, path: Path) -> TimeSeries:
    if spec.loader == "ucr":
        return load_ucr(path)
    return load_csv(path, value_column=spec.value_column, label_column=spec.label_column)


def _dataset_skip(spec: DatasetSpec, series_id: str, reason: str, detail: str) -> SkipRecord:
    return SkipRecord(spec.name, series_id, None, "", "", "", reason, detail)


def load_dataset(spec: DatasetSpec) -> tuple[list[TimeSeries], list[SkipRecord]]:
    """Load every series of a dataset; unreadable files become skip entries."""
    series: list[TimeSeries] = []
    skips: list[SkipRecord] = []
    files = _series_files(spec)
    if not files:
        skips.append(_dataset_skip(spec, "", "NoSeriesFound", f"nothing to load under {spec.path}"))
    for path in files:
        try:
            series.append(_load_one(spec, path))
        except FeatadError as exc:
            skips.append(_dataset_skip(spec, path.stem, exc.reason, str(exc)))
        except (OSError, UnicodeDecodeError, ValueError) as exc:
            skips.append(_dataset_skip(spec, path.stem, type(exc).__name__, str(exc)))

    if spec.curation is not None:
        labeled = []
        for ts in series:
            try:
                contamination_rate(ts)
                labeled.append(ts)
            except MissingLabels as exc:
                skips.append(_dataset_skip(spec, ts.id, exc.reason, str(exc)))
        kept = curate(labeled, spec.curation.max_contamination, spec.curation.corr_threshold)
        kept_ids = {ts.id for ts in kept}
        for ts in labeled:
            if ts.id not in kept_ids:
                skips.append(_dataset_skip(spec, ts.id, CURATED_OUT, "removed by contamination/correlation curation"))
        series = kept
    return series, skips


@dataclass(frozen=True)
class _Unit:
    dataset: str
    series: TimeSeries
    window_size: int


def _score(X: np.ndarray, detector: str, cfg: ExperimentConfig, seed: int) -> np.ndarray:
    if detector == "IF":
        return if_score(if_fit(X, T=cfg.if_trees, seed=seed), X).scores
    return lof_score(X, k=cfg.lof_k).scores


def _run_unit(unit: _Unit, cfg: ExperimentConfig) -> list[ResultRecord | SkipRecord]:
    ts, W = unit.series, unit.window_size
    out: list[ResultRecord | SkipRecord] = []

    def skip_all(reason: str, detail: str, norms=cfg.row_normalization, reps=cfg.representations) -> None:
        for norm in norms:
            for rep in reps:
                for det in cfg.detectors:
                    out.append(SkipRecord(unit.dataset, ts.id, W, rep, det, norm, reason, detail))

    try:
        wm = slice_series(ts, W, cfg.stride)
    except FeatadError as exc:
        skip_all(exc.reason, str(exc))
        return out
    labels = wm.window_labels
    if labels is None:
        skip_all("MissingLabels", "series has no ground-truth labels")
        return out
    if labels.min() == labels.max():
        skip_all("SingleClass", f"all {labels.size} windows share label {int(labels[0])}")
        return out

    catalog = default_catalog(W, expensive=cfg.expensive_features) if "FE" in cfg.representations else ()
    for norm in cfg.row_normalization:
        wmn = normalize_rows(wm, norm)
        for rep in cfg.representations:
            t0 = time.perf_counter()
            if rep == "TS":
                X = wmn.rows
            else:
                try:
                    fm = prune(extract(wmn, catalog))
                    if cfg.feature_normalization:
                        fm = normalize_feature_columns(fm)
                except FeatadError as exc:
                    skip_all(exc.reason, str(exc), norms=(norm,), reps=(rep,))
                    continue
                X = fm.rows
            prep_ms = (time.perf_counter() - t0) * 1000.0
            for det in cfg.detectors:
                t1 = time.perf_counter()
                seed = task_seed(cfg.seed, ts.id, W, rep, det)
                try:
                    value = auc(_score(X, det, cfg, seed), labels)
                except FeatadError as exc:
                    out.append(SkipRecord(unit.dataset, ts.id, W, rep, det, norm, exc.reason, str(exc)))
                    continue
                runtime = int(round(prep_ms + (time.perf_counter() - t1) * 1000.0))
                out.append(
                    ResultRecord(
                        dataset=unit.dataset,
                        series_id=ts.id,
                        window_size=W,
                        representation=rep,
                        detector=det,
                        normalization=norm,
                        auc=value,
                        n_windows=wm.n_windows,
                        seed=cfg.seed,
                        runtime_ms=runtime,
                    )
                )
    return out


def _run_unit_star(args: tuple[_Unit, ExperimentConfig]) -> list[ResultRecord | SkipRecord]:
    return _run_unit(*args)


def _execute(units: list[_Unit], cfg: ExperimentConfig, workers: int) -> Iterator[list]:
    if workers <= 1 or len(units) <= 1:
        for unit in units:
            yield _run_unit(unit, cfg)
        return
    with ProcessPoolExecutor(max_workers=workers) as pool:
        # map() yields in submission order regardless of completion order
        yield from pool.map(_run_unit_star, [(u, cfg) for u in units], chunksize=1)


def run_experiment(cfg: ExperimentConfig, parallelism: int | None = None) -> ExperimentRun:
    """Run every (series x W x normalization x representation x detector) task.

    Results, skips and timings are appended to ``cfg.output_dir`` as each
    unit finishes. Per-series failures never abort the run.
    """
    out_dir = Path(cfg.output_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    run = ExperimentRun(output_dir=out_dir)
    workers = parallelism if parallelism is not None else cfg.workers

    with (
        CsvAppender(out_dir / RESULTS_FILE, RESULT_COLUMNS) as results,
        CsvAppender(out_dir / SKIPS_FILE, SKIP_COLUMNS) as skips,
        CsvAppender(out_dir / TIMINGS_FILE, TIMING_COLUMNS) as timings,
    ):
        units: list[_Unit] = []
        for spec in cfg.datasets:
            series, load_skips = load_dataset(spec)
            for s in load_skips:
                skips.write(s)
                run.skips.append(s)
            units.extend(_Unit(spec.name, ts, W) for ts in series for W in cfg.window_sizes)
        log.info("running %d units with %d worker(s)", len(units), workers)

        for outcome in _execute(units, cfg, workers):
            for item in outcome:
                if isinstance(item, ResultRecord):
                    results.write(item)
                    timings.write(item)
                    run.records.append(item)
                else:
                    skips.write(item)
                    run.skips.append(item)
    return run
