from __future__ import annotations

from typing import Sequence

import numpy as np
from scipy.stats import rankdata

from featad.detectors.scores import ScoreVector
from featad.errors import SingleClass


def auc(scores: ScoreVector | Sequence[float] | np.ndarray, labels: Sequence[int] | np.ndarray) -> float:
    """Area under the ROC curve in its Mann-Whitney form, ties counted one half.

    Raises:
        SingleClass: labels are all 0 or all 1, so the AUC is undefined.
    """
    s = np.asarray(scores.scores if isinstance(scores, ScoreVector) else scores, dtype=np.float64)
    y = np.asarray(labels)
    if s.shape != y.shape:
        raise ValueError(f"{s.size} scores vs {y.size} labels")
    pos = y == 1
    n_pos = int(pos.sum())
    n_neg = y.size - n_pos
    if n_pos == 0 or n_neg == 0:
        raise SingleClass(f"AUC undefined with {n_pos} positives and {n_neg} negatives")
    ranks = rankdata(s, method="average")
    u = ranks[pos].sum() - n_pos * (n_pos + 1) / 2.0
    return float(u / (n_pos * n_neg))
