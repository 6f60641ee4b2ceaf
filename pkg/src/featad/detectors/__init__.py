"""Unsupervised row scorers; every score is oriented so larger = more anomalous."""

from featad.detectors.iforest import (
    IsolationForestModel,
    IsolationTree,
    average_path_length,
    if_fit,
    if_score,
)
from featad.detectors.lof import lof_score, lof_values
from featad.detectors.scores import ScoreVector, read_scores_csv, write_scores_csv

__all__ = [
    "IsolationForestModel",
    "IsolationTree",
    "ScoreVector",
    "average_path_length",
    "if_fit",
    "if_score",
    "lof_score",
    "lof_values",
    "read_scores_csv",
    "write_scores_csv",
]
