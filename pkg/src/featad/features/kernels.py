"""Vectorized feature kernels.

Every kernel takes a :class:`WindowBatch` (n windows of equal length W) plus
its descriptor parameters and returns an array of n values. Kernels only use
elementwise arithmetic and reductions along the window axis, never BLAS, so a
window's value does not depend on which other windows share its batch.

Conventions: moments and standard deviations are population-based;
quantiles use linear interpolation between order statistics; zero
denominators yield NaN or inf rather than being masked.
"""

from __future__ import annotations

from functools import cached_property
from typing import Callable

import numpy as np

from featad.errors import UnknownFeature

Kernel = Callable[..., np.ndarray]
FEATURES: dict[str, Kernel] = {}


def feature(name: str) -> Callable[[Kernel], Kernel]:
    def register(fn: Kernel) -> Kernel:
        FEATURES[name] = fn
        return fn

    return register


def get_kernel(name: str) -> Kernel:
    try:
        return FEATURES[name]
    except KeyError:
        raise UnknownFeature(name) from None


class WindowBatch:
    """Lazily cached intermediate quantities shared between kernels."""

    def __init__(self, X: np.ndarray) -> None:
        X = np.ascontiguousarray(X, dtype=np.float64)
        if X.ndim != 2:
            raise ValueError(f"expected a 2-D batch, got shape {X.shape}")
        self.X = X
        self.n, self.W = X.shape
        self._acf: dict[int, np.ndarray] = {}
        self._quantiles: dict[float, np.ndarray] = {}

    @cached_property
    def sorted(self) -> np.ndarray:
        return np.sort(self.X, axis=1)

    @cached_property
    def constant(self) -> np.ndarray:
        return self.sorted[:, 0] == self.sorted[:, -1]

    @cached_property
    def mean(self) -> np.ndarray:
        mu = self.X.mean(axis=1)
        # exact mean for constant rows so that centered values are exactly zero
        return np.where(self.constant, self.X[:, 0], mu)

    @cached_property
    def centered(self) -> np.ndarray:
        return self.X - self.mean[:, None]

    @cached_property
    def var(self) -> np.ndarray:
        return (self.centered**2).mean(axis=1)

    @cached_property
    def std(self) -> np.ndarray:
        return np.sqrt(self.var)

    @cached_property
    def diff(self) -> np.ndarray:
        return np.diff(self.X, axis=1)

    @cached_property
    def abs_energy(self) -> np.ndarray:
        return (self.X * self.X).sum(axis=1)

    @cached_property
    def rfft(self) -> np.ndarray:
        return np.fft.rfft(self.X, axis=1)

    def quantile(self, q: float) -> np.ndarray:
        if q not in self._quantiles:
            h = (self.W - 1) * q
            lo = int(np.floor(h))
            hi = min(lo + 1, self.W - 1)
            frac = h - lo
            a = self.sorted[:, lo]
            b = self.sorted[:, hi]
            self._quantiles[q] = a + (b - a) * frac
        return self._quantiles[q]

    def autocorrelation(self, lag: int) -> np.ndarray:
        if lag not in self._acf:
            W = self.W
            if lag >= W:
                self._acf[lag] = np.full(self.n, np.nan)
            else:
                c = self.centered
                num = (c[:, : W - lag] * c[:, lag:]).sum(axis=1)
                with np.errstate(divide="ignore", invalid="ignore"):
                    self._acf[lag] = num / ((W - lag) * self.var)
        return self._acf[lag]

    @cached_property
    def pacf(self) -> np.ndarray:
        return _durbin_levinson(self, 5)

    @cached_property
    def linear_trend(self) -> dict[str, np.ndarray]:
        W = self.W
        t = np.arange(W, dtype=np.float64)
        tc = t - t.mean()
        stt = float((tc * tc).sum())
        c = self.centered
        sxy = (c * tc).sum(axis=1)
        sxx = (c * c).sum(axis=1)
        slope = sxy / stt
        intercept = self.mean - slope * t.mean()
        resid = c - slope[:, None] * tc
        sse = (resid * resid).sum(axis=1)
        with np.errstate(divide="ignore", invalid="ignore"):
            rvalue = sxy / np.sqrt(stt * sxx)
            stderr = np.sqrt(sse / (W - 2) / stt) if W > 2 else np.full(self.n, np.nan)
        return {"slope": slope, "intercept": intercept, "rvalue": rvalue, "stderr": stderr}

    @cached_property
    def reoccurring(self) -> tuple[np.ndarray, np.ndarray]:
        """Masks over ``sorted``: (value occurs more than once, first copy of a value)."""
        s = self.sorted
        eq = s[:, 1:] == s[:, :-1]
        pad = np.zeros((self.n, 1), dtype=bool)
        repeated = np.hstack([eq, pad]) | np.hstack([pad, eq])
        first = ~np.hstack([pad, eq])
        return repeated, first


def _durbin_levinson(batch: WindowBatch, max_lag: int) -> np.ndarray:
    """Partial autocorrelations for lags 1..max_lag, shape (n, max_lag)."""
    n = batch.n
    r = np.column_stack([np.ones(n)] + [batch.autocorrelation(k) for k in range(1, max_lag + 1)])
    out = np.full((n, max_lag), np.nan)
    phi = np.zeros((n, max_lag + 1))
    with np.errstate(divide="ignore", invalid="ignore"):
        phi[:, 1] = r[:, 1]
        out[:, 0] = r[:, 1]
        for k in range(2, max_lag + 1):
            num = r[:, k].copy()
            den = np.ones(n)
            for j in range(1, k):
                num -= phi[:, j] * r[:, k - j]
                den -= phi[:, j] * r[:, j]
            phi_kk = num / den
            prev = phi.copy()
            for j in range(1, k):
                phi[:, j] = prev[:, j] - phi_kk * prev[:, k - j]
            phi[:, k] = phi_kk
            out[:, k - 1] = phi_kk
    return out


def _longest_run(mask: np.ndarray) -> np.ndarray:
    run = np.zeros(mask.shape[0], dtype=np.int64)
    best = np.zeros(mask.shape[0], dtype=np.int64)
    for j in range(mask.shape[1]):
        run = (run + 1) * mask[:, j]
        np.maximum(best, run, out=best)
    return best.astype(np.float64)


# basic statistics

@feature("mean")
def mean(b: WindowBatch) -> np.ndarray:
    return b.mean


@feature("median")
def median(b: WindowBatch) -> np.ndarray:
    return b.quantile(0.5)


@feature("minimum")
def minimum(b: WindowBatch) -> np.ndarray:
    return b.sorted[:, 0]


@feature("maximum")
def maximum(b: WindowBatch) -> np.ndarray:
    return b.sorted[:, -1]


@feature("sum_values")
def sum_values(b: WindowBatch) -> np.ndarray:
    return b.X.sum(axis=1)


@feature("variance")
def variance(b: WindowBatch) -> np.ndarray:
    return b.var


@feature("standard_deviation")
def standard_deviation(b: WindowBatch) -> np.ndarray:
    return b.std


@feature("root_mean_square")
def root_mean_square(b: WindowBatch) -> np.ndarray:
    return np.sqrt(b.abs_energy / b.W)


@feature("abs_energy")
def abs_energy(b: WindowBatch) -> np.ndarray:
    return b.abs_energy


@feature("skewness")
def skewness(b: WindowBatch) -> np.ndarray:
    m3 = (b.centered**3).mean(axis=1)
    with np.errstate(divide="ignore", invalid="ignore"):
        return m3 / b.var**1.5


@feature("kurtosis")
def kurtosis(b: WindowBatch) -> np.ndarray:
    m4 = (b.centered**4).mean(axis=1)
    with np.errstate(divide="ignore", invalid="ignore"):
        return m4 / b.var**2 - 3.0


@feature("quantile")
def quantile(b: WindowBatch, q: float) -> np.ndarray:
    return b.quantile(q)


@feature("interquartile_range")
def interquartile_range(b: WindowBatch) -> np.ndarray:
    return b.quantile(0.75) - b.quantile(0.25)


# changes

@feature("mean_abs_change")
def mean_abs_change(b: WindowBatch) -> np.ndarray:
    return np.abs(b.diff).mean(axis=1)


@feature("mean_change")
def mean_change(b: WindowBatch) -> np.ndarray:
    return (b.X[:, -1] - b.X[:, 0]) / (b.W - 1)


@feature("absolute_sum_of_changes")
def absolute_sum_of_changes(b: WindowBatch) -> np.ndarray:
    return np.abs(b.diff).sum(axis=1)


@feature("cid_ce")
def cid_ce(b: WindowBatch) -> np.ndarray:
    return np.sqrt((b.diff * b.diff).sum(axis=1))


# counts relative to the mean

@feature("count_above_mean")
def count_above_mean(b: WindowBatch) -> np.ndarray:
    return (b.centered > 0).sum(axis=1).astype(np.float64)


@feature("count_below_mean")
def count_below_mean(b: WindowBatch) -> np.ndarray:
    return (b.centered < 0).sum(axis=1).astype(np.float64)


@feature("longest_strike_above_mean")
def longest_strike_above_mean(b: WindowBatch) -> np.ndarray:
    return _longest_run(b.centered > 0)


@feature("longest_strike_below_mean")
def longest_strike_below_mean(b: WindowBatch) -> np.ndarray:
    return _longest_run(b.centered < 0)


@feature("number_mean_crossings")
def number_mean_crossings(b: WindowBatch) -> np.ndarray:
    sign = np.sign(b.centered)
    last = np.zeros(b.n)
    count = np.zeros(b.n)
    for j in range(b.W):
        s = sign[:, j]
        # a zero keeps the previous sign; leading zeros carry no sign yet
        count += (s != 0) & (last != 0) & (s != last)
        last = np.where(s != 0, s, last)
    return count


# locations and duplicates

@feature("first_location_of_maximum")
def first_location_of_maximum(b: WindowBatch) -> np.ndarray:
    return np.argmax(b.X, axis=1) / b.W


@feature("last_location_of_maximum")
def last_location_of_maximum(b: WindowBatch) -> np.ndarray:
    return (b.W - 1 - np.argmax(b.X[:, ::-1], axis=1)) / b.W


@feature("first_location_of_minimum")
def first_location_of_minimum(b: WindowBatch) -> np.ndarray:
    return np.argmin(b.X, axis=1) / b.W


@feature("last_location_of_minimum")
def last_location_of_minimum(b: WindowBatch) -> np.ndarray:
    return (b.W - 1 - np.argmin(b.X[:, ::-1], axis=1)) / b.W


@feature("has_duplicate_max")
def has_duplicate_max(b: WindowBatch) -> np.ndarray:
    return ((b.X == b.sorted[:, -1:]).sum(axis=1) > 1).astype(np.float64)


@feature("has_duplicate_min")
def has_duplicate_min(b: WindowBatch) -> np.ndarray:
    return ((b.X == b.sorted[:, :1]).sum(axis=1) > 1).astype(np.float64)


@feature("unique_value_ratio")
def unique_value_ratio(b: WindowBatch) -> np.ndarray:
    _, first = b.reoccurring
    return first.sum(axis=1) / b.W


# correlation structure

@feature("autocorrelation")
def autocorrelation(b: WindowBatch, lag: int) -> np.ndarray:
    return b.autocorrelation(lag)


@feature("partial_autocorrelation")
def partial_autocorrelation(b: WindowBatch, lag: int) -> np.ndarray:
    if lag <= b.pacf.shape[1]:
        return b.pacf[:, lag - 1]
    return _durbin_levinson(b, lag)[:, lag - 1]


@feature("agg_autocorrelation")
def agg_autocorrelation(b: WindowBatch, f_agg: str, maxlag: int = 40) -> np.ndarray:
    lags = range(1, min(maxlag, b.W - 1) + 1)
    if not lags:
        return np.full(b.n, np.nan)
    acf = np.column_stack([b.autocorrelation(lag) for lag in lags])
    if f_agg == "mean":
        return acf.mean(axis=1)
    if f_agg == "median":
        return np.median(acf, axis=1)
    if f_agg == "var":
        return acf.var(axis=1)
    raise UnknownFeature(f"agg_autocorrelation f_agg={f_agg!r}")


@feature("c3")
def c3(b: WindowBatch, lag: int) -> np.ndarray:
    W, X = b.W, b.X
    if W - 2 * lag <= 0:
        return np.full(b.n, np.nan)
    return (X[:, : W - 2 * lag] * X[:, lag : W - lag] * X[:, 2 * lag :]).mean(axis=1)


@feature("time_reversal_asymmetry")
def time_reversal_asymmetry(b: WindowBatch, lag: int) -> np.ndarray:
    W, X = b.W, b.X
    if W - 2 * lag <= 0:
        return np.full(b.n, np.nan)
    x0 = X[:, : W - 2 * lag]
    x1 = X[:, lag : W - lag]
    x2 = X[:, 2 * lag :]
    return (x2 * x2 * x1 - x1 * x0 * x0).mean(axis=1)


# spectrum

@feature("fft_coefficient")
def fft_coefficient(b: WindowBatch, coeff: int, attr: str) -> np.ndarray:
    if coeff > b.W // 2:
        return np.full(b.n, np.nan)
    z = b.rfft[:, coeff]
    if attr == "real":
        return z.real.copy()
    if attr == "imag":
        return z.imag.copy()
    if attr == "abs":
        return np.abs(z)
    if attr == "angle":
        return np.angle(z)
    raise UnknownFeature(f"fft_coefficient attr={attr!r}")


def _spectral_moments(b: WindowBatch) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    power = np.abs(b.rfft) ** 2
    k = np.arange(power.shape[1], dtype=np.float64)
    with np.errstate(divide="ignore", invalid="ignore"):
        p = power / power.sum(axis=1, keepdims=True)
    centroid = (p * k).sum(axis=1)
    dev = k[None, :] - centroid[:, None]
    return p, centroid, dev


@feature("spectral_centroid")
def spectral_centroid(b: WindowBatch) -> np.ndarray:
    return _spectral_moments(b)[1]


@feature("spectral_variance")
def spectral_variance(b: WindowBatch) -> np.ndarray:
    p, _, dev = _spectral_moments(b)
    return (p * dev**2).sum(axis=1)


@feature("spectral_skewness")
def spectral_skewness(b: WindowBatch) -> np.ndarray:
    p, _, dev = _spectral_moments(b)
    var = (p * dev**2).sum(axis=1)
    with np.errstate(divide="ignore", invalid="ignore"):
        return (p * dev**3).sum(axis=1) / var**1.5


@feature("spectral_kurtosis")
def spectral_kurtosis(b: WindowBatch) -> np.ndarray:
    p, _, dev = _spectral_moments(b)
    var = (p * dev**2).sum(axis=1)
    with np.errstate(divide="ignore", invalid="ignore"):
        return (p * dev**4).sum(axis=1) / var**2


# distribution shape

@feature("binned_entropy")
def binned_entropy(b: WindowBatch, bins: int = 10) -> np.ndarray:
    lo = b.sorted[:, :1]
    span = b.sorted[:, -1:] - lo
    with np.errstate(divide="ignore", invalid="ignore"):
        idx = np.floor((b.X - lo) * bins / span)
    idx = np.where(span > 0, np.clip(idx, 0, bins - 1), 0)
    out = np.zeros(b.n)
    for k in range(bins):
        p = (idx == k).sum(axis=1) / b.W
        with np.errstate(divide="ignore", invalid="ignore"):
            out -= np.where(p > 0, p * np.log(p), 0.0)
    return out


@feature("ratio_beyond_r_sigma")
def ratio_beyond_r_sigma(b: WindowBatch, r: float) -> np.ndarray:
    return (np.abs(b.centered) > r * b.std[:, None]).mean(axis=1)


@feature("number_peaks")
def number_peaks(b: WindowBatch, n: int) -> np.ndarray:
    W, X = b.W, b.X
    if W < 2 * n + 1:
        return np.zeros(b.n)
    core = X[:, n : W - n]
    mask = np.ones_like(core, dtype=bool)
    for j in range(1, n + 1):
        mask &= core > X[:, n - j : W - n - j]
        mask &= core > X[:, n + j : W - n + j]
    return mask.sum(axis=1).astype(np.float64)


@feature("linear_trend")
def linear_trend(b: WindowBatch, attr: str) -> np.ndarray:
    try:
        return b.linear_trend[attr]
    except KeyError:
        raise UnknownFeature(f"linear_trend attr={attr!r}") from None


# extension families

@feature("energy_ratio_by_chunks")
def energy_ratio_by_chunks(b: WindowBatch, num_segments: int, segment_focus: int) -> np.ndarray:
    idx = np.array_split(np.arange(b.W), num_segments)[segment_focus]
    chunk = b.X[:, idx]
    with np.errstate(divide="ignore", invalid="ignore"):
        return (chunk * chunk).sum(axis=1) / b.abs_energy


@feature("index_mass_quantile")
def index_mass_quantile(b: WindowBatch, q: float) -> np.ndarray:
    cs = np.cumsum(np.abs(b.X), axis=1)
    with np.errstate(divide="ignore", invalid="ignore"):
        frac = cs / cs[:, -1:]
    out = (np.argmax(frac >= q, axis=1) + 1) / b.W
    return np.where(cs[:, -1] > 0, out, np.nan)


@feature("change_quantiles")
def change_quantiles(b: WindowBatch, ql: float, qh: float, isabs: bool, f_agg: str) -> np.ndarray:
    lo = b.quantile(ql)[:, None]
    hi = b.quantile(qh)[:, None]
    inside = (b.X >= lo) & (b.X <= hi)
    keep = inside[:, :-1] & inside[:, 1:]
    d = np.abs(b.diff) if isabs else b.diff
    count = keep.sum(axis=1)
    safe = np.maximum(count, 1)
    mu = np.where(keep, d, 0.0).sum(axis=1) / safe
    if f_agg == "mean":
        out = mu
    elif f_agg == "var":
        out = np.where(keep, (d - mu[:, None]) ** 2, 0.0).sum(axis=1) / safe
    else:
        raise UnknownFeature(f"change_quantiles f_agg={f_agg!r}")
    return np.where(count > 0, out, 0.0)


@feature("number_crossing_m")
def number_crossing_m(b: WindowBatch, m: float) -> np.ndarray:
    above = b.X > m
    return (above[:, 1:] != above[:, :-1]).sum(axis=1).astype(np.float64)


@feature("count_above")
def count_above(b: WindowBatch, t: float) -> np.ndarray:
    return (b.X >= t).mean(axis=1)


@feature("count_below")
def count_below(b: WindowBatch, t: float) -> np.ndarray:
    return (b.X <= t).mean(axis=1)


@feature("variation_coefficient")
def variation_coefficient(b: WindowBatch) -> np.ndarray:
    with np.errstate(divide="ignore", invalid="ignore"):
        return b.std / b.mean


@feature("mean_second_derivative_central")
def mean_second_derivative_central(b: WindowBatch) -> np.ndarray:
    X = b.X
    if b.W < 3:
        return np.full(b.n, np.nan)
    return ((X[:, 2:] - 2.0 * X[:, 1:-1] + X[:, :-2]) / 2.0).mean(axis=1)


@feature("percentage_of_reoccurring_datapoints_to_all_datapoints")
def pct_reoccurring_datapoints(b: WindowBatch) -> np.ndarray:
    repeated, _ = b.reoccurring
    return repeated.sum(axis=1) / b.W


@feature("percentage_of_reoccurring_values_to_all_values")
def pct_reoccurring_values(b: WindowBatch) -> np.ndarray:
    repeated, first = b.reoccurring
    return (repeated & first).sum(axis=1) / first.sum(axis=1)


@feature("sum_of_reoccurring_values")
def sum_reoccurring_values(b: WindowBatch) -> np.ndarray:
    repeated, first = b.reoccurring
    return np.where(repeated & first, b.sorted, 0.0).sum(axis=1)


@feature("sum_of_reoccurring_data_points")
def sum_reoccurring_data_points(b: WindowBatch) -> np.ndarray:
    repeated, _ = b.reoccurring
    return np.where(repeated, b.sorted, 0.0).sum(axis=1)


# expensive tier

def _template_chebyshev(x: np.ndarray, length: int, count: int) -> np.ndarray:
    """Chebyshev distances between the first ``count`` templates of each row.

    Returns shape (rows, count, count).
    """
    dist = np.zeros((x.shape[0], count, count))
    for k in range(length):
        seg = x[:, k : k + count]
        np.maximum(dist, np.abs(seg[:, :, None] - seg[:, None, :]), out=dist)
    return dist


def _row_chunks(n: int, W: int) -> range:
    step = max(1, 2_000_000 // max(1, W * W))
    return range(0, n, step)


@feature("sample_entropy")
def sample_entropy(b: WindowBatch, m: int = 2, r: float = 0.2) -> np.ndarray:
    W = b.W
    out = np.full(b.n, np.nan)
    count = W - m
    if count < 2:
        return out
    tol = r * b.std
    iu = np.triu_indices(count, k=1)
    chunks = _row_chunks(b.n, W)
    for start in chunks:
        rows = slice(start, start + chunks.step)
        x = b.X[rows]
        t = tol[rows][:, None]
        d_m = _template_chebyshev(x, m, count)[:, iu[0], iu[1]]
        d_m1 = _template_chebyshev(x, m + 1, count)[:, iu[0], iu[1]]
        B = (d_m <= t).sum(axis=1)
        A = (d_m1 <= t).sum(axis=1)
        with np.errstate(divide="ignore", invalid="ignore"):
            out[rows] = -np.log(A / B)
    return out


@feature("approximate_entropy")
def approximate_entropy(b: WindowBatch, m: int = 2, r: float = 0.2) -> np.ndarray:
    W = b.W
    if W - m < 1:
        return np.full(b.n, np.nan)
    tol = r * b.std
    out = np.empty(b.n)
    chunks = _row_chunks(b.n, W)
    for start in chunks:
        rows = slice(start, start + chunks.step)
        x = b.X[rows]
        t = tol[rows][:, None, None]
        phis = []
        for length in (m, m + 1):
            count = W - length + 1
            frac = (_template_chebyshev(x, length, count) <= t).sum(axis=2) / count
            phis.append(np.log(frac).mean(axis=1))
        out[rows] = phis[0] - phis[1]
    return out


@feature("permutation_entropy")
def permutation_entropy(b: WindowBatch, order: int = 3, delay: int = 1) -> np.ndarray:
    W = b.W
    span = (order - 1) * delay
    if W <= span:
        return np.full(b.n, np.nan)
    count = W - span
    emb = np.stack([b.X[:, k * delay : k * delay + count] for k in range(order)], axis=2)
    perm = np.argsort(emb, axis=2, kind="stable")
    code = np.zeros(perm.shape[:2], dtype=np.int64)
    for k in range(order):
        code = code * order + perm[:, :, k]
    out = np.zeros(b.n)
    for c in np.unique(code):
        p = (code == c).sum(axis=1) / count
        with np.errstate(divide="ignore", invalid="ignore"):
            out -= np.where(p > 0, p * np.log(p), 0.0)
    return out
