"""Local Outlier Factor with exact k-neighborhoods (ties at the k-distance included)."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.spatial import cKDTree
from scipy.spatial.distance import cdist

from featad.detectors.scores import ScoreVector, params_digest
from featad.errors import NonFiniteInput, TooFewRows

DETECTOR_ID = "LOF"
LRD_FLOOR = 1e-10
_BLOCK_ROWS = 512


@dataclass(frozen=True, eq=False)
class Neighborhoods:
    """CSR layout: neighbors of point i are ``indices[indptr[i]:indptr[i+1]]``."""

    k_distance: np.ndarray
    indptr: np.ndarray
    indices: np.ndarray
    distances: np.ndarray

    def of(self, i: int) -> np.ndarray:
        return self.indices[self.indptr[i] : self.indptr[i + 1]]


def _brute_neighborhoods(X: np.ndarray, k: int) -> Neighborhoods:
    F = X.shape[0]
    kdist = np.empty(F)
    idx_parts, dist_parts, counts = [], [], []
    for start in range(0, F, _BLOCK_ROWS):
        stop = min(start + _BLOCK_ROWS, F)
        D = cdist(X[start:stop], X, metric="euclidean")
        D[np.arange(stop - start), np.arange(start, stop)] = np.inf
        kd = np.partition(D, k - 1, axis=1)[:, k - 1]
        kdist[start:stop] = kd
        rr, cc = np.nonzero(D <= kd[:, None])
        idx_parts.append(cc)
        dist_parts.append(D[rr, cc])
        counts.append(np.bincount(rr, minlength=stop - start))
    indptr = np.concatenate(([0], np.cumsum(np.concatenate(counts))))
    return Neighborhoods(kdist, indptr, np.concatenate(idx_parts), np.concatenate(dist_parts))


def _kdtree_neighborhoods(X: np.ndarray, k: int) -> Neighborhoods:
    tree = cKDTree(X)
    F = X.shape[0]
    # k+1 because each point finds itself first (possibly tied with duplicates)
    dist, _ = tree.query(X, k=k + 1)
    # the tree rounds distances its own way; search a slightly wider ball and
    # settle membership with the same cdist arithmetic as the brute-force path
    radius = dist[:, -1] * (1.0 + 1e-9) + 1e-300
    balls = tree.query_ball_point(X, radius, p=2.0)
    kdist = np.empty(F)
    indices, distances, indptr = [], [], [0]
    for i, ball in enumerate(balls):
        ball = np.array(sorted(j for j in ball if j != i), dtype=np.int64)
        d = cdist(X[i : i + 1], X[ball], metric="euclidean")[0]
        kd = np.partition(d, k - 1)[k - 1]
        keep = d <= kd
        kdist[i] = kd
        indices.append(ball[keep])
        distances.append(d[keep])
        indptr.append(indptr[-1] + int(keep.sum()))
    return Neighborhoods(kdist, np.array(indptr), np.concatenate(indices), np.concatenate(distances))


def k_neighborhoods(X: np.ndarray, k: int, algorithm: str = "brute") -> Neighborhoods:
    if algorithm == "brute":
        return _brute_neighborhoods(X, k)
    if algorithm == "kdtree":
        return _kdtree_neighborhoods(X, k)
    raise ValueError(f"unknown neighbor algorithm {algorithm!r}")


def lof_values(X: np.ndarray, k: int = 20, algorithm: str = "brute") -> np.ndarray:
    """Raw LOF value of every row (about 1 for inliers, well above 1 for outliers)."""
    X = np.asarray(X, dtype=np.float64)
    if X.ndim != 2:
        raise ValueError(f"expected a 2-D matrix, got shape {X.shape}")
    F = X.shape[0]
    if F <= k:
        raise TooFewRows(f"LOF with k={k} needs more than {k} rows, got {F}")
    if not np.isfinite(X).all():
        raise NonFiniteInput("input matrix contains non-finite entries")

    nb = k_neighborhoods(X, k, algorithm)
    sizes = np.diff(nb.indptr)
    owner = np.repeat(np.arange(F), sizes)
    reach = np.maximum(nb.k_distance[nb.indices], nb.distances)
    mean_reach = np.bincount(owner, weights=reach, minlength=F) / sizes
    lrd = 1.0 / np.maximum(mean_reach, LRD_FLOOR)
    mean_lrd = np.bincount(owner, weights=lrd[nb.indices], minlength=F) / sizes
    return mean_lrd / lrd


def lof_score(X: np.ndarray, k: int = 20, algorithm: str = "brute") -> ScoreVector:
    return ScoreVector(
        scores=lof_values(X, k, algorithm),
        detector_id=DETECTOR_ID,
        params_digest=params_digest(DETECTOR_ID, {"k": k}),
        seed=None,
    )
