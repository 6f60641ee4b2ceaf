"""Per-window (row) and per-feature (column) normalization."""

from __future__ import annotations

from dataclasses import replace

import numpy as np

from featad.errors import UnknownMethod
from featad.features.extract import FeatureMatrix
from featad.windowing import WindowMatrix

ROW_METHODS = ("none", "minmax", "median_iqr", "mean_std")


def canonical_method(method: str) -> str:
    """Accept CLI spellings such as ``median-iqr`` for ``median_iqr``."""
    name = method.strip().lower().replace("-", "_")
    if name not in ROW_METHODS:
        raise UnknownMethod(f"unknown normalization {method!r}; expected one of {ROW_METHODS}")
    return name


def _quantile_sorted(s: np.ndarray, q: float) -> np.ndarray:
    h = (s.shape[1] - 1) * q
    lo = int(np.floor(h))
    hi = min(lo + 1, s.shape[1] - 1)
    return s[:, lo] + (s[:, hi] - s[:, lo]) * (h - lo)


def _scale(X: np.ndarray, center: np.ndarray, spread: np.ndarray) -> np.ndarray:
    out = np.zeros_like(X)
    ok = spread > 0
    out[ok] = (X[ok] - center[ok, None]) / spread[ok, None]
    return out


def normalize_array(X: np.ndarray, method: str) -> np.ndarray:
    """Normalize each row of ``X`` independently; zero-spread rows become zeros."""
    method = canonical_method(method)
    X = np.asarray(X, dtype=np.float64)
    if method == "none":
        return X.copy()
    if method == "minmax":
        lo = X.min(axis=1)
        return _scale(X, lo, X.max(axis=1) - lo)
    if method == "median_iqr":
        s = np.sort(X, axis=1)
        return _scale(X, _quantile_sorted(s, 0.5), _quantile_sorted(s, 0.75) - _quantile_sorted(s, 0.25))
    mu = X.mean(axis=1)
    sigma = np.sqrt(((X - mu[:, None]) ** 2).mean(axis=1))
    # a constant row can leave sigma at rounding noise instead of exact zero
    sigma = np.where(X.max(axis=1) == X.min(axis=1), 0.0, sigma)
    return _scale(X, mu, sigma)


def normalize_rows(wm: WindowMatrix, method: str = "none") -> WindowMatrix:
    """Horizontal normalization of every window; labels and indices are kept."""
    return wm.with_rows(normalize_array(wm.rows, method))


def normalize_feature_columns(fm: FeatureMatrix) -> FeatureMatrix:
    """Vertical z-scoring of each feature column with the population std."""
    X = fm.rows
    mu = X.mean(axis=0)
    sigma = np.sqrt(((X - mu) ** 2).mean(axis=0))
    sigma = np.where(X.max(axis=0) == X.min(axis=0), 0.0, sigma)
    out = np.zeros_like(X)
    ok = sigma > 0
    out[:, ok] = (X[:, ok] - mu[ok]) / sigma[ok]
    return replace(fm, rows=out)
