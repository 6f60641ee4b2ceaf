"""Rank aggregation and non-parametric tests for comparing methods across series."""

from __future__ import annotations

import math
from typing import Sequence

import numpy as np
from scipy.stats import chi2 as chi2_dist
from scipy.stats import norm, rankdata

from featad.errors import AllZeroDifferences, DegenerateInput, UndefinedEntry, UnsupportedM

EXACT_MAX_N = 20

# Two-tailed Nemenyi critical values q_alpha = studentized range quantile / sqrt(2),
# infinite degrees of freedom, for 2..10 methods.
NEMENYI_Q = {
    0.05: (1.960, 2.343, 2.569, 2.728, 2.850, 2.949, 3.031, 3.102, 3.164),
    0.10: (1.645, 2.052, 2.291, 2.459, 2.589, 2.693, 2.780, 2.855, 2.920),
}


def rank_rows(auc_table: np.ndarray | Sequence[Sequence[float]]) -> np.ndarray:
    """Per-row ranks, 1 = highest AUC, ties given their average rank."""
    table = np.asarray(auc_table, dtype=np.float64)
    if table.ndim != 2:
        raise ValueError(f"expected an S x M table, got shape {table.shape}")
    if not np.isfinite(table).all():
        raise UndefinedEntry("AUC table contains undefined entries")
    return rankdata(-table, method="average", axis=1)


def rank_methods(auc_table: np.ndarray | Sequence[Sequence[float]]) -> np.ndarray:
    """Mean rank of each method (column) over series (rows)."""
    table = np.asarray(auc_table, dtype=np.float64)
    if table.ndim != 2 or table.shape[0] < 1 or table.shape[1] < 2:
        raise DegenerateInput(f"need at least 1 series and 2 methods, got shape {table.shape}")
    return rank_rows(table).mean(axis=0)


def _exact_lower_tail(doubled_ranks: np.ndarray, threshold: int) -> float:
    """P(W+ <= threshold/2) under the null, counting all 2**n sign assignments.

    Works on doubled ranks so that midranks stay integral.
    """
    total = int(doubled_ranks.sum())
    counts = np.zeros(total + 1, dtype=np.int64)
    counts[0] = 1
    for r in doubled_ranks:
        r = int(r)
        shifted = np.zeros_like(counts)
        shifted[r:] = counts[: total + 1 - r]
        counts += shifted
    n = doubled_ranks.size
    return float(counts[: threshold + 1].sum()) / float(2**n)


def wilcoxon_signed_rank(
    a: Sequence[float] | np.ndarray,
    b: Sequence[float] | np.ndarray,
    method: str = "auto",
) -> tuple[float, float]:
    """Two-sided Wilcoxon signed-rank test on paired samples.

    Zero differences are dropped and ``|d|`` is ranked with midranks.
    ``method`` is ``"exact"`` (full null distribution), ``"approx"`` (normal
    approximation with tie and continuity corrections) or ``"auto"``, which
    is exact up to 20 non-zero differences.

    Returns:
        (min(W+, W-), two-sided p-value)
    """
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape != b.shape:
        raise ValueError(f"paired samples differ in length: {a.size} vs {b.size}")
    d = a - b
    d = d[d != 0]
    n = d.size
    if n == 0:
        raise AllZeroDifferences("all paired differences are zero")

    ranks = rankdata(np.abs(d), method="average")
    w_plus = float(ranks[d > 0].sum())
    w_minus = float(ranks[d < 0].sum())
    stat = min(w_plus, w_minus)

    if method == "auto":
        method = "exact" if n <= EXACT_MAX_N else "approx"
    if method == "exact":
        doubled = np.rint(2 * ranks).astype(np.int64)
        p = 2.0 * _exact_lower_tail(doubled, int(round(2 * stat)))
    elif method == "approx":
        mu = n * (n + 1) / 4.0
        _, tie_counts = np.unique(np.abs(d), return_counts=True)
        var = n * (n + 1) * (2 * n + 1) / 24.0 - float((tie_counts**3 - tie_counts).sum()) / 48.0
        z = max(0.0, abs(w_plus - mu) - 0.5) / math.sqrt(var)
        p = 2.0 * float(norm.sf(z))
    else:
        raise ValueError(f"unknown method {method!r}")
    return stat, min(1.0, p)


def friedman_test(rank_table: np.ndarray | Sequence[Sequence[float]]) -> tuple[float, float]:
    """Friedman chi-square on per-series ranks (S rows, M methods)."""
    ranks = np.asarray(rank_table, dtype=np.float64)
    if ranks.ndim != 2 or ranks.shape[0] < 2 or ranks.shape[1] < 2:
        raise DegenerateInput(f"need S >= 2 series and M >= 2 methods, got shape {ranks.shape}")
    S, M = ranks.shape
    mean_ranks = ranks.mean(axis=0)
    stat = 12.0 * S / (M * (M + 1)) * float((mean_ranks**2).sum()) - 3.0 * S * (M + 1)
    # cancellation can leave a tiny negative value for fully tied ranks
    stat = max(stat, 0.0)
    return stat, float(chi2_dist.sf(stat, M - 1))


def nemenyi_cd(M: int, S: int, alpha: float = 0.05) -> float:
    """Critical difference of mean ranks for the Nemenyi post-hoc test."""
    if alpha not in NEMENYI_Q:
        raise ValueError(f"alpha must be one of {sorted(NEMENYI_Q)}")
    if not 2 <= M <= 10:
        raise UnsupportedM(f"Nemenyi table covers 2..10 methods, got {M}")
    if S < 1:
        raise DegenerateInput("need at least one series")
    q = NEMENYI_Q[alpha][M - 2]
    return q * math.sqrt(M * (M + 1) / (6.0 * S))
