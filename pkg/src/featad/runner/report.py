"""Rank tables, Wilcoxon p-value tables and CD diagrams from result records.

Files written to the report directory:

* ``mean_ranks.csv`` - TS vs FE mean ranks per (normalization, dataset, W, detector)
* ``p_values.csv`` - the matching Wilcoxon signed-rank tests (FE vs TS AUC)
* ``comparison__<norm>.csv`` - both detectors side by side, one row per (dataset, W)
* ``normalization_ranks.csv`` - only when several row normalizations were run
* ``cd__<dataset>__<norm>.svg`` / ``.txt`` - CD diagram per dataset, blocks are
  (series, W) pairs so ranks are averaged over window sizes
"""

from __future__ import annotations

import csv
import math
import re
from collections import defaultdict
from pathlib import Path
from typing import Iterable, Mapping, Sequence

import numpy as np

from featad.errors import AllZeroDifferences, InsufficientData
from featad.evaluation.cd_diagram import render_cd_diagram
from featad.evaluation.records import DETECTORS, REPRESENTATIONS, ResultRecord
from featad.evaluation.stats import friedman_test, nemenyi_cd, rank_methods, rank_rows, wilcoxon_signed_rank
from featad.normalize import ROW_METHODS

METHOD_ORDER = ("TS-IF", "FE-IF", "TS-LOF", "FE-LOF")
SIGNIFICANCE = 0.05


def _fmt_rank(x: float) -> str:
    return f"{x:.6f}"


def _fmt_p(p: float) -> str:
    return "NA" if math.isnan(p) else f"{p:.6e}"


def _safe_name(name: str) -> str:
    return re.sub(r"[^A-Za-z0-9._+-]+", "_", name)


def _write_csv(path: Path, header: Sequence[str], rows: Iterable[Sequence]) -> Path:
    with path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)
    return path


def apply_groups(records: Sequence[ResultRecord], groups: Mapping[str, Sequence[str]] | None) -> list[ResultRecord]:
    """Rename member datasets to their group name (e.g. merge two small corpora)."""
    if not groups:
        return list(records)
    owner = {member: name for name, members in groups.items() for member in members}
    out = []
    for r in records:
        if r.dataset in owner:
            r = ResultRecord(**{**r.__dict__, "dataset": owner[r.dataset]})
        out.append(r)
    return out


def _index(records: Sequence[ResultRecord]) -> dict[tuple, float]:
    table: dict[tuple, float] = {}
    for r in records:
        key = (r.normalization, r.dataset, r.window_size, r.series_id, r.method)
        if key in table:
            raise InsufficientData(f"duplicate record for {key}")
        table[key] = r.auc
    return table


def pairwise_comparison(
    auc_by_key: Mapping[tuple, float],
    norm: str,
    dataset: str,
    W: int,
    detector: str,
    series_ids: Sequence[str],
) -> dict | None:
    """TS vs FE for one detector; only series with both AUCs are paired."""
    pairs = [
        (auc_by_key[(norm, dataset, W, s, f"TS-{detector}")], auc_by_key[(norm, dataset, W, s, f"FE-{detector}")])
        for s in series_ids
        if (norm, dataset, W, s, f"TS-{detector}") in auc_by_key
        and (norm, dataset, W, s, f"FE-{detector}") in auc_by_key
    ]
    if not pairs:
        return None
    table = np.array(pairs)
    ts_rank, fe_rank = rank_methods(table)
    try:
        stat, p = wilcoxon_signed_rank(table[:, 1], table[:, 0])
    except AllZeroDifferences:
        stat, p = 0.0, math.nan
    return {"n": len(pairs), "TS": ts_rank, "FE": fe_rank, "stat": stat, "p": p}


def generate_report(
    records: Sequence[ResultRecord],
    out: str | Path,
    groups: Mapping[str, Sequence[str]] | None = None,
    alpha: float = 0.05,
) -> list[Path]:
    """Write every report table and diagram under ``out``; return the paths written."""
    if not records:
        raise InsufficientData("no result records")
    records = apply_groups(records, groups)
    methods = {r.method for r in records}
    if len(methods) < 2:
        raise InsufficientData(f"need at least 2 methods to compare, got {sorted(methods)}")

    out = Path(out)
    out.mkdir(parents=True, exist_ok=True)
    auc_by_key = _index(records)
    norms = [n for n in ROW_METHODS if any(r.normalization == n for r in records)]
    datasets = sorted({r.dataset for r in records})
    windows = sorted({r.window_size for r in records})
    series_of: dict[str, list[str]] = defaultdict(list)
    for r in records:
        if r.series_id not in series_of[r.dataset]:
            series_of[r.dataset].append(r.series_id)
    for ds in series_of:
        series_of[ds].sort()
    detectors = [d for d in DETECTORS if f"TS-{d}" in methods and f"FE-{d}" in methods]

    written: list[Path] = []
    mean_rank_rows, p_rows = [], []
    for norm in norms:
        comp_rows = []
        for ds in datasets:
            for W in windows:
                row: list = [ds, W]
                any_result = False
                for det in detectors:
                    res = pairwise_comparison(auc_by_key, norm, ds, W, det, series_of[ds])
                    if res is None:
                        row += ["", "", "", "", ""]
                        continue
                    any_result = True
                    significant = (not math.isnan(res["p"])) and res["p"] < SIGNIFICANCE
                    mean_rank_rows.append([norm, ds, W, det, res["n"], _fmt_rank(res["TS"]), _fmt_rank(res["FE"])])
                    p_rows.append([norm, ds, W, det, res["n"], f"{res['stat']:g}", _fmt_p(res["p"]), int(significant)])
                    row += [res["n"], _fmt_rank(res["TS"]), _fmt_rank(res["FE"]), _fmt_p(res["p"]), int(significant)]
                if any_result:
                    comp_rows.append(row)
        if detectors:
            header = ["dataset", "window_size"]
            for det in detectors:
                header += [f"{det}_n_series", f"{det}_TS_rank", f"{det}_FE_rank", f"{det}_p_value", f"{det}_significant"]
            written.append(_write_csv(out / f"comparison__{norm}.csv", header, comp_rows))

        for ds in datasets:
            path = _cd_for_dataset(auc_by_key, norm, ds, windows, series_of[ds], out, alpha)
            if path is not None:
                written.extend(path)

    written.append(
        _write_csv(out / "mean_ranks.csv", ["normalization", "dataset", "window_size", "detector", "n_series", "TS_rank", "FE_rank"], mean_rank_rows)
    )
    written.append(
        _write_csv(out / "p_values.csv", ["normalization", "dataset", "window_size", "detector", "n_series", "statistic", "p_value", "significant"], p_rows)
    )
    if len(norms) > 1:
        written.append(_normalization_table(records, norms, out))
    return written


def _cd_for_dataset(
    auc_by_key: Mapping[tuple, float],
    norm: str,
    dataset: str,
    windows: Sequence[int],
    series_ids: Sequence[str],
    out: Path,
    alpha: float,
) -> list[Path] | None:
    present = [
        m for m in METHOD_ORDER
        if any((norm, dataset, W, s, m) in auc_by_key for W in windows for s in series_ids)
    ]
    if len(present) < 2:
        return None
    blocks = [
        [auc_by_key[(norm, dataset, W, s, m)] for m in present]
        for W in windows
        for s in series_ids
        if all((norm, dataset, W, s, m) in auc_by_key for m in present)
    ]
    if not blocks:
        return None
    table = np.array(blocks)
    mean_ranks = rank_methods(table)
    S, M = table.shape
    cd = nemenyi_cd(M, S, alpha)
    notes = [f"blocks (series x window size): {S}  alpha: {alpha:g}"]
    if S >= 2:
        chi2, p = friedman_test(rank_rows(table))
        notes.append(f"friedman chi2: {chi2:.4f}  p: {_fmt_p(p)}")
    base = out / f"cd__{_safe_name(dataset)}__{norm}"
    svg, txt = render_cd_diagram(
        mean_ranks,
        present,
        table.mean(axis=0),
        table.std(axis=0),
        cd,
        base,
        title=f"{dataset} ({norm})",
        notes=notes,
    )
    return [svg, txt]


def _normalization_table(records: Sequence[ResultRecord], norms: Sequence[str], out: Path) -> Path:
    """Mean rank of each row normalization; blocks are (series, detector) pairs."""
    by_key: dict[tuple, dict[str, float]] = defaultdict(dict)
    for r in records:
        by_key[(r.dataset, r.window_size, r.representation, r.series_id, r.detector)][r.normalization] = r.auc
    grouped: dict[tuple, list[list[float]]] = defaultdict(list)
    for (ds, W, rep, _sid, _det), aucs in sorted(by_key.items()):
        if all(n in aucs for n in norms):
            grouped[(ds, W, rep)].append([aucs[n] for n in norms])
    rows = []
    for (ds, W, rep), blocks in sorted(grouped.items(), key=lambda kv: (kv[0][0], kv[0][1], REPRESENTATIONS.index(kv[0][2]))):
        ranks = rank_methods(np.array(blocks))
        rows.append([ds, W, rep, len(blocks), *(_fmt_rank(x) for x in ranks)])
    return _write_csv(out / "normalization_ranks.csv", ["dataset", "window_size", "representation", "n_blocks", *norms], rows)
