"""Isolation Forest built from scratch.

Trees are stored as flat arrays (feature, threshold, left, right, size) so
that scoring walks all rows through a tree at once instead of recursing per
row. Each tree draws from its own generator seeded by ``(seed, tree index)``,
which makes the forest independent of how tree building is scheduled.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from featad.detectors.scores import ScoreVector, params_digest
from featad.errors import DegenerateInput, DimensionMismatch, NonFiniteInput

EULER_GAMMA = 0.5772156649
DETECTOR_ID = "IF"


def average_path_length(n: int | np.ndarray) -> float | np.ndarray:
    """Expected path length c(n) of an unsuccessful BST search over n points."""
    n_arr = np.asarray(n, dtype=np.float64)
    out = np.zeros_like(n_arr)
    big = n_arr > 2
    nb = n_arr[big]
    out[big] = 2.0 * (np.log(nb - 1.0) + EULER_GAMMA) - 2.0 * (nb - 1.0) / nb
    out[n_arr == 2] = 1.0
    return float(out) if out.ndim == 0 else out


@dataclass(frozen=True, eq=False)
class IsolationTree:
    """One isolation tree. Leaves have ``feature == -1``."""

    feature: np.ndarray
    threshold: np.ndarray
    left: np.ndarray
    right: np.ndarray
    size: np.ndarray
    depth: np.ndarray

    @property
    def n_nodes(self) -> int:
        return self.feature.size

    @property
    def max_depth(self) -> int:
        return int(self.depth.max())

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, IsolationTree):
            return NotImplemented
        # leaves carry a NaN threshold, so NaNs must compare equal
        return np.array_equal(self.threshold, other.threshold, equal_nan=True) and all(
            np.array_equal(getattr(self, f), getattr(other, f))
            for f in ("feature", "left", "right", "size", "depth")
        )

    __hash__ = None  # type: ignore[assignment]

    def path_lengths(self, X: np.ndarray) -> np.ndarray:
        """Edges to the reached leaf plus c(leaf size), for every row of X."""
        node = np.zeros(X.shape[0], dtype=np.int64)
        rows = np.arange(X.shape[0])
        for _ in range(self.max_depth):
            feat = self.feature[node]
            internal = feat >= 0
            if not internal.any():
                break
            idx = rows[internal]
            at = node[internal]
            go_left = X[idx, feat[internal]] < self.threshold[at]
            node[internal] = np.where(go_left, self.left[at], self.right[at])
        return self.depth[node] + average_path_length(self.size[node])


def _grow_tree(X: np.ndarray, rng: np.random.Generator, height_limit: int) -> IsolationTree:
    feature: list[int] = []
    threshold: list[float] = []
    left: list[int] = []
    right: list[int] = []
    size: list[int] = []
    depth: list[int] = []

    def new_node(n: int, d: int) -> int:
        feature.append(-1)
        threshold.append(np.nan)
        left.append(-1)
        right.append(-1)
        size.append(n)
        depth.append(d)
        return len(feature) - 1

    stack = [(new_node(X.shape[0], 0), np.arange(X.shape[0]))]
    while stack:
        node, idx = stack.pop()
        d = depth[node]
        if d >= height_limit or idx.size <= 1:
            continue
        sub = X[idx]
        lo = sub.min(axis=0)
        hi = sub.max(axis=0)
        # splittable only if some float lies strictly between min and max
        candidates = np.flatnonzero(np.nextafter(lo, np.inf) < hi)
        if candidates.size == 0:
            continue
        q = int(candidates[rng.integers(candidates.size)])
        t = rng.uniform(lo[q], hi[q])
        while not lo[q] < t < hi[q]:
            # uniform() can return the lower endpoint (or round onto the upper one)
            t = rng.uniform(lo[q], hi[q])
        mask = sub[:, q] < t
        feature[node] = q
        threshold[node] = t
        lnode = new_node(int(mask.sum()), d + 1)
        rnode = new_node(int(idx.size - mask.sum()), d + 1)
        left[node] = lnode
        right[node] = rnode
        # right pushed first so the left subtree is numbered first
        stack.append((rnode, idx[~mask]))
        stack.append((lnode, idx[mask]))

    return IsolationTree(
        feature=np.array(feature, dtype=np.int64),
        threshold=np.array(threshold, dtype=np.float64),
        left=np.array(left, dtype=np.int64),
        right=np.array(right, dtype=np.int64),
        size=np.array(size, dtype=np.int64),
        depth=np.array(depth, dtype=np.int64),
    )


@dataclass(frozen=True, eq=False)
class IsolationForestModel:
    trees: tuple[IsolationTree, ...]
    subsample_size: int
    tree_count: int
    seed: int
    n_features: int

    @property
    def height_limit(self) -> int:
        return int(math.ceil(math.log2(self.subsample_size))) if self.subsample_size > 1 else 0

    @property
    def params(self) -> dict:
        return {"T": self.tree_count, "psi": self.subsample_size, "seed": self.seed}


def _check_matrix(X: np.ndarray) -> np.ndarray:
    X = np.asarray(X, dtype=np.float64)
    if X.ndim != 2:
        raise DegenerateInput(f"expected a 2-D matrix, got shape {X.shape}")
    if not np.isfinite(X).all():
        raise NonFiniteInput("input matrix contains non-finite entries")
    return X


def if_fit(
    X: np.ndarray,
    T: int = 100,
    psi: int | None = None,
    seed: int = 0,
    n_jobs: int = 1,
) -> IsolationForestModel:
    """Grow ``T`` isolation trees on subsamples of ``psi`` rows (default ``min(256, F)``)."""
    X = _check_matrix(X)
    F, d = X.shape
    if F < 2:
        raise DegenerateInput(f"need at least 2 rows, got {F}")
    if d < 1:
        raise DegenerateInput("need at least one column")
    psi = min(256, F) if psi is None else min(int(psi), F)
    if psi < 2:
        raise DegenerateInput(f"subsample size must be >= 2, got {psi}")
    height_limit = int(math.ceil(math.log2(psi)))
    base = np.random.SeedSequence(seed)

    def build(t: int) -> IsolationTree:
        rng = np.random.default_rng(np.random.SeedSequence(base.entropy, spawn_key=(t,)))
        idx = rng.choice(F, size=psi, replace=False)
        return _grow_tree(X[idx], rng, height_limit)

    if n_jobs > 1:
        with ThreadPoolExecutor(max_workers=n_jobs) as pool:
            trees = tuple(pool.map(build, range(T)))
    else:
        trees = tuple(build(t) for t in range(T))
    return IsolationForestModel(trees=trees, subsample_size=psi, tree_count=T, seed=seed, n_features=d)


def if_mean_path_length(model: IsolationForestModel, X: np.ndarray) -> np.ndarray:
    X = _check_matrix(X)
    if X.shape[1] != model.n_features:
        raise DimensionMismatch(f"model fit on {model.n_features} columns, got {X.shape[1]}")
    total = np.zeros(X.shape[0])
    # fixed summation order over trees keeps scores schedule-independent
    for tree in model.trees:
        total += tree.path_lengths(X)
    return total / len(model.trees)


def if_score(model: IsolationForestModel, X: np.ndarray) -> ScoreVector:
    """Anomaly score ``2 ** (-E[h(x)] / c(psi))`` in (0, 1)."""
    mean_h = if_mean_path_length(model, X)
    scores = np.power(2.0, -mean_h / average_path_length(model.subsample_size))
    return ScoreVector(
        scores=scores,
        detector_id=DETECTOR_ID,
        params_digest=params_digest(DETECTOR_ID, model.params),
        seed=model.seed,
    )
