from __future__ import annotations

import csv
import hashlib
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Any

import numpy as np


def params_digest(detector_id: str, params: dict[str, Any]) -> str:
    blob = json.dumps({"detector": detector_id, **params}, sort_keys=True)
    return hashlib.sha256(blob.encode()).hexdigest()[:16]


@dataclass(frozen=True, eq=False)
class ScoreVector:
    """Per-window anomaly scores; larger means more anomalous."""

    scores: np.ndarray
    detector_id: str
    params_digest: str
    seed: int | None = None

    def __len__(self) -> int:
        return self.scores.size


def write_scores_csv(sv: ScoreVector, path: str | Path, window_start_indices=None) -> None:
    starts = window_start_indices if window_start_indices is not None else np.arange(len(sv))
    with Path(path).open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["window_start_index", "score"])
        for start, score in zip(starts, sv.scores):
            writer.writerow([int(start), repr(float(score))])


def read_scores_csv(path: str | Path) -> tuple[np.ndarray, np.ndarray]:
    with Path(path).open(newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        rows = list(reader)
    starts = np.array([int(r["window_start_index"]) for r in rows], dtype=np.int64)
    scores = np.array([float(r["score"]) for r in rows])
    return starts, scores
