"""One test per acceptance criterion; each records a PASS/FAIL line for the summary.

Run with ``pytest tests/test_acceptance.py -v`` and read the
"acceptance criteria" section at the end of the output.
"""

import json
import math
import time

import numpy as np
import pytest

from conftest import ACCEPTANCE_LINES, make_series
from feature_oracle import catalog_mismatches, random_windows
from lof_oracle import lof_reference, neighborhoods_reference
from report_fixture import golden_records
from test_metrics import auc_pairs
from test_report import GOLDEN
from test_stats import wilcoxon_enumeration
from featad.cli import main
from featad.detectors import average_path_length, if_fit, if_score, lof_values
from featad.detectors.lof import k_neighborhoods
from featad.evaluation import auc, nemenyi_cd, wilcoxon_signed_rank
from featad.features import compute_feature, default_catalog
from featad.runner import DatasetSpec, ExperimentConfig, generate_report, run_experiment
from featad.runner.experiment import RESULTS_FILE
from featad.series_io import save_csv
from featad.runner import synth_corpus
from featad.windowing import slice_series, window_count


class Criterion:
    """Collects failed checks and records one summary line, then fails the test if needed."""

    def __init__(self, name):
        self.name = name
        self.problems = []
        self.notes = []
        self.t0 = time.perf_counter()

    def check(self, ok, message):
        if not ok:
            self.problems.append(message)
        return ok

    def note(self, text):
        self.notes.append(text)

    def finish(self, time_limit=None):
        elapsed = time.perf_counter() - self.t0
        if time_limit is not None:
            self.check(elapsed < time_limit, f"took {elapsed:.1f} s, limit {time_limit} s")
        status = "PASS" if not self.problems else "FAIL"
        detail = "; ".join(self.notes + self.problems)
        line = f"{status}  {self.name} [{elapsed:.1f} s]" + (f": {detail}" if detail else "")
        ACCEPTANCE_LINES.append(line)
        print(line)
        assert not self.problems, line


def test_windowing_oracle():
    c = Criterion("windowing oracle, 1000 random (m, W, stride)")
    rng = np.random.default_rng(2024)
    for _ in range(1000):
        m = int(rng.integers(1, 400))
        W = int(rng.integers(1, m + 1))
        alpha = int(rng.integers(1, 50))
        values = rng.normal(size=m)
        labels = (rng.random(m) < 0.03).astype(int)
        wm = slice_series(make_series(values, labels), W, alpha)
        F = (m - W) // alpha + 1
        if not c.check(wm.n_windows == F == window_count(m, W, alpha), f"count wrong for {(m, W, alpha)}"):
            continue
        starts = np.arange(F) * alpha
        direct = np.array([values[s : s + W] for s in starts])
        want_labels = np.array([int(labels[s : s + W].any()) for s in starts])
        c.check(np.array_equal(wm.rows, direct), f"rows differ for {(m, W, alpha)}")
        c.check(np.array_equal(wm.window_labels, want_labels), f"labels differ for {(m, W, alpha)}")
    c.finish(time_limit=5.0)


def test_feature_oracles():
    c = Criterion("feature oracles, 500 windows for each W in {8, 32, 64}, rel 1e-9")
    checked = 0
    for W in (8, 32, 64):
        X = random_windows(np.random.default_rng(1000 + W), W, 500)
        cat = default_catalog(W)
        bad = catalog_mismatches(X, cat)
        checked += X.shape[0] * len(cat)
        c.check(not bad, f"W={W}: {len(bad)} mismatches, first {bad[:3]}")
    c.note(f"{checked} feature values compared")

    rng = np.random.default_rng(77)
    acf = [d for d in default_catalog(32) if d.name == "autocorrelation"]
    energy = next(d for d in default_catalog(32) if d.name == "abs_energy")
    for _ in range(200):
        x = rng.normal(size=32)
        for scale in (2.0, 0.5, -4.0):
            # power-of-two scaling is exact in binary floating point
            c.check(compute_feature(energy, scale * x) == scale * scale * compute_feature(energy, x), "abs_energy scaling (exact)")
            for d in acf:
                c.check(compute_feature(d, scale * x) == compute_feature(d, x), f"{d.column_name} scale invariance (exact)")
        a, b = rng.uniform(-5, 5), rng.uniform(-100, 100)
        c.check(
            math.isclose(compute_feature(energy, a * x), a * a * compute_feature(energy, x), rel_tol=1e-12),
            "abs_energy scaling",
        )
        for d in acf:
            c.check(
                math.isclose(compute_feature(d, a * x + b), compute_feature(d, x), rel_tol=1e-9, abs_tol=1e-12),
                f"{d.column_name} affine invariance",
            )
    c.finish(time_limit=60.0)


def test_auc_oracle():
    c = Criterion("AUC oracle, 1000 instances vs pair counting to 1e-12, label flip")
    rng = np.random.default_rng(5)
    for i in range(1000):
        n = int(rng.integers(2, 80))
        labels = rng.integers(0, 2, size=n)
        labels[:2] = [0, 1]
        scores = rng.integers(0, 5, size=n).astype(float) if i % 2 else rng.normal(size=n)
        value = auc(scores, labels)
        c.check(abs(value - auc_pairs(scores, labels)) <= 1e-12, f"case {i}")
        c.check(abs(auc(scores, 1 - labels) - (1 - value)) <= 1e-12, f"flip case {i}")
    c.finish()


def test_wilcoxon_oracle():
    c = Criterion("Wilcoxon oracle, exact vs 2^n enumeration for n <= 12, n=5 case, approx at n=20")
    rng = np.random.default_rng(6)
    done = 0
    while done < 200:
        n = int(rng.integers(1, 13))
        if done % 3 == 0:
            a, b = rng.integers(0, 4, size=n).astype(float), rng.integers(0, 4, size=n).astype(float)
        else:
            a, b = rng.normal(size=n), rng.normal(size=n)
        if np.all(a == b):
            continue
        done += 1
        _, p = wilcoxon_signed_rank(a, b, method="exact")
        c.check(abs(p - wilcoxon_enumeration(a, b)) <= 1e-12, f"n={n} exact p differs")
    stat, p = wilcoxon_signed_rank([5.0, 4, 3, 2, 1], [0.0, 0, 0, 0, 0])
    c.check(stat == 0.0 and p == 0.0625, f"n=5 all positive gave ({stat}, {p})")
    worst = 0.0
    for _ in range(100):
        a, b = rng.normal(size=20), rng.normal(size=20) + rng.normal() * 0.5
        worst = max(worst, abs(wilcoxon_signed_rank(a, b, "approx")[1] - wilcoxon_signed_rank(a, b, "exact")[1]))
    c.check(worst <= 0.01, f"approx vs exact at n=20 differs by {worst:.4f}")
    c.note(f"max |approx - exact| at n=20: {worst:.4f}")
    c.finish()


def test_lof_oracle():
    c = Criterion("LOF oracle, 200 instances vs brute force, duplicates, grid plus outlier")
    rng = np.random.default_rng(8)
    for i in range(200):
        F, d = int(rng.integers(6, 101)), int(rng.integers(1, 11))
        k = int(rng.integers(1, min(F - 1, 25) + 1))
        X = rng.integers(0, 4, size=(F, d)).astype(float) if i % 3 == 0 else rng.normal(size=(F, d))
        nb = k_neighborhoods(X, k)
        c.check(
            [sorted(nb.of(j).tolist()) for j in range(F)] == neighborhoods_reference(X, k),
            f"instance {i}: neighborhoods differ",
        )
        c.check(lof_values(X, k).tolist() == lof_reference(X, k), f"instance {i}: scores not bit-identical")
    dup = lof_values(np.vstack([np.full((25, 3), 2.0), [[9.0, 9.0, 9.0]]]), k=20)
    c.check(np.all(dup[:25] == 1.0), "duplicates do not all have LOF 1")
    grid = lof_values(np.array([[float(v)] for v in [*range(10), 100]]), k=3)
    c.check(int(np.argmax(grid)) == 10 and grid[10] > 3, "grid outlier not the argmax")
    c.check(bool(np.all((grid[1:9] >= 0.8) & (grid[1:9] <= 1.3))), "interior grid LOF outside [0.8, 1.3]")
    c.finish()


def test_iforest_sanity():
    c = Criterion("IF sanity: bounds, identical rows, outlier over 100 seeds, c(256), thread determinism")
    rng = np.random.default_rng(9)
    X = rng.normal(size=(400, 5))
    s = if_score(if_fit(X, seed=0), X).scores
    c.check(bool(np.all((s > 0) & (s < 1))), "scores outside (0, 1)")
    same = if_score(if_fit(np.ones((10, 3)), seed=0), np.ones((10, 3))).scores
    c.check(bool(np.all(same == same[0])), "identical rows score differently")
    hits = 0
    for seed in range(100):
        r = np.random.default_rng(seed)
        Y = np.vstack([r.normal(size=(100, 2)) * 0.1, [[3.0, 3.0]]])
        sc = if_score(if_fit(Y, seed=seed), Y).scores
        hits += int(np.argmax(sc)) == 100 and sc[100] > np.delete(sc, 100).max()
    c.check(hits >= 99, f"outlier strictly highest in only {hits}/100 seeds")
    c.note(f"outlier strictly highest in {hits}/100 seeds")
    c256 = average_path_length(256)
    c.check(abs(c256 - 10.2448) <= 1e-3, f"c(256) = {c256}")
    ref = if_score(if_fit(X, seed=3, n_jobs=1), X).scores.tobytes()
    for jobs in (2, 4, 8):
        c.check(if_score(if_fit(X, seed=3, n_jobs=jobs), X).scores.tobytes() == ref, f"n_jobs={jobs} changes scores")
    c.finish()


def test_direction_reproduction(tmp_path):
    c = Criterion("direction: FE-IF mean rank < TS-IF with Wilcoxon p < 0.05, 50 series, W in {32, 64}")
    data = tmp_path / "synth"
    data.mkdir()
    for ts in synth_corpus(42, 50, 4096):
        save_csv(ts, data / f"{ts.id}.csv")
    cfg = ExperimentConfig(
        datasets=(DatasetSpec("synth", str(data)),),
        window_sizes=(32, 64),
        detectors=("IF",),
        seed=42,
        parallelism="auto",
        output_dir=str(tmp_path / "out"),
    )
    run = run_experiment(cfg)
    c.check(not run.skips, f"{len(run.skips)} skipped tasks")
    generate_report(run.records, tmp_path / "report")
    rows = (tmp_path / "report" / "comparison__none.csv").read_text().splitlines()
    header = rows[0].split(",")
    for line in rows[1:]:
        row = dict(zip(header, line.split(",")))
        ts_rank, fe_rank, p = float(row["IF_TS_rank"]), float(row["IF_FE_rank"]), float(row["IF_p_value"])
        c.note(f"W={row['window_size']}: TS {ts_rank:.3f} FE {fe_rank:.3f} p={p:.3g} (n={row['IF_n_series']})")
        c.check(fe_rank < ts_rank and p < 0.05, f"W={row['window_size']} direction not reproduced")
    c.check(len(rows) == 3, "expected one comparison row per window size")
    c.finish(time_limit=300.0)


def test_report_goldens(tmp_path):
    c = Criterion("report goldens byte-identical for the fixed 8-record input; CD(4, 10, 0.05) = 1.483")
    written = generate_report(golden_records(), tmp_path)
    expected = sorted(p.name for p in GOLDEN.iterdir())
    c.check(sorted(p.name for p in written) == expected, "file set differs from goldens")
    for name in expected:
        c.check((tmp_path / name).exists() and (tmp_path / name).read_bytes() == (GOLDEN / name).read_bytes(), f"{name} differs")
    cd = nemenyi_cd(4, 10, 0.05)
    c.check(abs(cd - 1.483) <= 1e-3, f"CD = {cd}")
    c.note(f"CD = {cd:.4f}")
    c.finish()


def test_end_to_end_determinism(tmp_path):
    c = Criterion("end-to-end determinism: `run` twice at parallelism 1 and 8, byte-identical results CSV")
    data = tmp_path / "data"
    main(["synth", "--seed", "11", "--n", "4", "--m", "1024", "--out", str(data)])
    outputs = []
    for parallelism in (1, 8):
        for attempt in range(2):
            out = tmp_path / f"out_p{parallelism}_{attempt}"
            cfg = tmp_path / f"cfg_{parallelism}_{attempt}.json"
            cfg.write_text(json.dumps({
                "datasets": [{"name": "syn", "path": str(data)}],
                "window_sizes": [32, 64],
                "seed": 5,
                "output_dir": str(out),
            }))
            code = main(["run", "--config", str(cfg), "--parallelism", str(parallelism), "--no-report"])
            c.check(code == 0, f"exit code {code}")
            outputs.append((out / RESULTS_FILE).read_bytes())
    c.check(all(o == outputs[0] for o in outputs), "results CSV differs between runs")
    c.note(f"{len(outputs[0].splitlines()) - 1} result rows")
    c.finish()
