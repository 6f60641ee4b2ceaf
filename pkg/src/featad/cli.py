"""Command-line entry point.

Exit codes: 0 success, 1 configuration or input error, 2 the run finished
but some tasks were skipped (series removed by curation do not count).
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path
from typing import Sequence

import numpy as np

from featad.detectors import if_fit, if_score, lof_score, read_scores_csv, write_scores_csv
from featad.errors import ConfigError, FeatadError, InsufficientData
from featad.evaluation import auc, read_results_csv
from featad.features import default_catalog, extract, prune, read_matrix_csv, write_feature_csv
from featad.normalize import ROW_METHODS, normalize_feature_columns, normalize_rows
from featad.runner import generate_report, load_config, run_experiment, synth_corpus
from featad.series_io import TimeSeries, load_csv, load_ucr, save_csv
from featad.windowing import slice_series

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_PARTIAL = 2

log = logging.getLogger("featad")


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on usage errors, which would collide with "partial failure"
    def error(self, message: str) -> None:  # type: ignore[override]
        self.print_usage(sys.stderr)
        self.exit(EXIT_ERROR, f"{self.prog}: error: {message}\n")


def _load_series(path: str, loader: str) -> TimeSeries:
    return load_ucr(path) if loader == "ucr" else load_csv(path)


def _norm_choice(text: str) -> str:
    return text.replace("-", "_")


def _add_series_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--series", required=True, help="series file (CSV with value,label columns or UCR .txt)")
    p.add_argument("--loader", choices=("csv", "ucr"), default="csv")
    p.add_argument("--window", "-W", type=int, required=True, help="window size W")
    p.add_argument("--stride", type=int, default=1)


def _cmd_run(args: argparse.Namespace) -> int:
    cfg = load_config(args.config)
    run = run_experiment(cfg, parallelism=args.parallelism)
    print(f"{len(run.records)} results, {len(run.skips)} skips -> {run.output_dir}")
    if not args.no_report and run.records:
        groups = {k: list(v) for k, v in cfg.groups.items()}
        try:
            paths = generate_report(run.records, Path(cfg.output_dir) / "report", groups=groups)
            print(f"report: {len(paths)} files in {Path(cfg.output_dir) / 'report'}")
        except InsufficientData as exc:
            print(f"report skipped: {exc}", file=sys.stderr)
    for s in run.failures:
        log.warning("skipped %s W=%s %s-%s: %s", s.series_id, s.window_size, s.representation, s.detector, s.reason)
    return EXIT_PARTIAL if run.failures else EXIT_OK


def _cmd_extract(args: argparse.Namespace) -> int:
    ts = _load_series(args.series, args.loader)
    wm = normalize_rows(slice_series(ts, args.window, args.stride), args.normalization)
    if args.representation == "TS":
        columns = [f"x{j}" for j in range(wm.window_size)]
        with Path(args.out).open("w", encoding="utf-8") as fh:
            fh.write(",".join(["window_start_index", *columns]) + "\n")
            for start, row in zip(wm.window_start_indices, wm.rows):
                fh.write(",".join([str(int(start)), *(repr(float(v)) for v in row)]) + "\n")
        print(f"{wm.n_windows} windows x {wm.window_size} columns -> {args.out}")
        return EXIT_OK
    fm = prune(extract(wm, default_catalog(args.window, expensive=args.expensive), n_jobs=args.jobs))
    if args.feature_normalization:
        fm = normalize_feature_columns(fm)
    write_feature_csv(fm, args.out)
    print(f"{fm.rows.shape[0]} windows x {fm.rows.shape[1]} features ({len(fm.dropped_columns)} dropped) -> {args.out}")
    return EXIT_OK


def _cmd_detect(args: argparse.Namespace) -> int:
    starts, X, _ = read_matrix_csv(args.matrix)
    if args.detector == "IF":
        sv = if_score(if_fit(X, T=args.trees, seed=args.seed, n_jobs=args.jobs), X)
    else:
        sv = lof_score(X, k=args.k)
    write_scores_csv(sv, args.out, starts)
    print(f"{len(sv)} scores ({sv.detector_id}, params {sv.params_digest}) -> {args.out}")
    return EXIT_OK


def _cmd_evaluate(args: argparse.Namespace) -> int:
    starts, scores = read_scores_csv(args.scores)
    wm = slice_series(_load_series(args.series, args.loader), args.window, args.stride)
    if wm.window_labels is None:
        raise ConfigError(f"{args.series} has no labels")
    position = {int(s): i for i, s in enumerate(wm.window_start_indices)}
    try:
        labels = np.array([wm.window_labels[position[int(s)]] for s in starts])
    except KeyError as exc:
        raise ConfigError(f"score file has window start {exc} not produced by W={args.window}") from None
    print(f"{auc(scores, labels):.6f}")
    return EXIT_OK


def _parse_group(text: str) -> tuple[str, list[str]]:
    name, sep, members = text.partition("=")
    if not sep or not name or not members:
        raise argparse.ArgumentTypeError(f"expected NAME=dataset1,dataset2 but got {text!r}")
    return name, [m for m in members.split(",") if m]


def _cmd_report(args: argparse.Namespace) -> int:
    records = read_results_csv(args.input)
    paths = generate_report(records, args.out, groups=dict(args.group or []))
    print(f"{len(paths)} files -> {args.out}")
    return EXIT_OK


def _cmd_synth(args: argparse.Namespace) -> int:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    corpus = synth_corpus(args.seed, args.n, args.m)
    for ts in corpus:
        save_csv(ts, out / f"{ts.id}.csv")
    print(f"{len(corpus)} series of length {args.m} -> {out}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="featad", description="Window-level anomaly detection for univariate time series.")
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("run", help="run a JSON-configured experiment")
    p.add_argument("--config", required=True)
    p.add_argument("--parallelism", type=int, default=None, help="override the config's worker count")
    p.add_argument("--no-report", action="store_true", help="write result files only")
    p.set_defaults(func=_cmd_run)

    p = sub.add_parser("extract", help="window a series and write its feature (or raw window) table")
    _add_series_args(p)
    p.add_argument("--representation", choices=("FE", "TS"), default="FE")
    p.add_argument("--normalization", type=_norm_choice, choices=ROW_METHODS, default="none")
    p.add_argument("--feature-normalization", action="store_true")
    p.add_argument("--expensive", action="store_true", help="add the entropy features")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_extract)

    p = sub.add_parser("detect", help="score the rows of a window or feature table")
    p.add_argument("--matrix", required=True, help="CSV written by `extract`")
    p.add_argument("--detector", choices=("IF", "LOF"), required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--trees", type=int, default=100)
    p.add_argument("--k", type=int, default=20)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_detect)

    p = sub.add_parser("evaluate", help="window-level AUC of a score file")
    p.add_argument("--scores", required=True)
    _add_series_args(p)
    p.set_defaults(func=_cmd_evaluate)

    p = sub.add_parser("report", help="rank tables, p-values and CD diagrams from a results CSV")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--group", action="append", type=_parse_group, metavar="NAME=A,B", help="merge datasets")
    p.set_defaults(func=_cmd_report)

    p = sub.add_parser("synth", help="write a seeded synthetic corpus as CSV files")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_synth)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except (FeatadError, ValueError, OSError) as exc:
        print(f"featad {args.command}: {exc}", file=sys.stderr)
        return EXIT_ERROR
