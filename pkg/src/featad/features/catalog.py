"""Feature descriptors and the default per-window catalog."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Iterable

from featad.errors import WindowTooSmall

STANDARD = "standard"
EXPENSIVE = "expensive"

FFT_MAX_COEFFICIENT = 10
FFT_ATTRS = ("real", "imag", "abs", "angle")
AUTOCORR_LAGS = tuple(range(1, 11))
PACF_LAGS = tuple(range(1, 6))
C3_LAGS = (1, 2, 3)
QUANTILES = (0.1, 0.25, 0.75, 0.9)
MASS_QUANTILES = (0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9)
CHANGE_QUANTILE_LEVELS = (0.0, 0.2, 0.4, 0.6, 0.8, 1.0)
ENERGY_SEGMENTS = 10


def _fmt(value: Any) -> str:
    if isinstance(value, bool):
        return str(value)
    if isinstance(value, float):
        return format(value, "g")
    return str(value)


@dataclass(frozen=True)
class FeatureDescriptor:
    """Identity of one constructed column.

    ``params`` is an ordered tuple of ``(key, value)`` pairs so that
    descriptors stay hashable and their column names stable.
    """

    name: str
    params: tuple[tuple[str, Any], ...] = ()
    cost_tier: str = STANDARD

    @property
    def column_name(self) -> str:
        parts = [self.name] + [f"{k}={_fmt(v)}" for k, v in self.params]
        return "__".join(parts)

    @property
    def kwargs(self) -> dict[str, Any]:
        return dict(self.params)

    def __str__(self) -> str:
        return self.column_name


def _d(name: str, tier: str = STANDARD, **params: Any) -> FeatureDescriptor:
    return FeatureDescriptor(name, tuple(params.items()), tier)


def _core_families(W: int) -> Iterable[FeatureDescriptor]:
    for name in (
        "mean", "median", "minimum", "maximum", "sum_values",
        "variance", "standard_deviation", "root_mean_square",
        "abs_energy", "skewness", "kurtosis",
    ):
        yield _d(name)
    for q in QUANTILES:
        yield _d("quantile", q=q)
    yield _d("interquartile_range")

    for name in ("mean_abs_change", "mean_change", "absolute_sum_of_changes", "cid_ce"):
        yield _d(name)
    for name in (
        "count_above_mean", "count_below_mean",
        "longest_strike_above_mean", "longest_strike_below_mean",
        "number_mean_crossings",
    ):
        yield _d(name)
    for name in (
        "first_location_of_maximum", "last_location_of_maximum",
        "first_location_of_minimum", "last_location_of_minimum",
        "has_duplicate_max", "has_duplicate_min", "unique_value_ratio",
    ):
        yield _d(name)

    for lag in AUTOCORR_LAGS:
        yield _d("autocorrelation", lag=lag)
    for lag in PACF_LAGS:
        yield _d("partial_autocorrelation", lag=lag)
    for lag in C3_LAGS:
        yield _d("c3", lag=lag)
    for lag in C3_LAGS:
        yield _d("time_reversal_asymmetry", lag=lag)

    for k in range(min(FFT_MAX_COEFFICIENT, W // 2) + 1):
        for attr in FFT_ATTRS:
            yield _d("fft_coefficient", coeff=k, attr=attr)
    for name in ("spectral_centroid", "spectral_variance", "spectral_skewness", "spectral_kurtosis"):
        yield _d(name)

    yield _d("binned_entropy", bins=10)
    for r in (1, 2, 3):
        yield _d("ratio_beyond_r_sigma", r=r)
    for n in (1, 3):
        yield _d("number_peaks", n=n)
    for attr in ("slope", "intercept", "rvalue", "stderr"):
        yield _d("linear_trend", attr=attr)


def _extension_families(W: int) -> Iterable[FeatureDescriptor]:
    for focus in range(ENERGY_SEGMENTS):
        yield _d("energy_ratio_by_chunks", num_segments=ENERGY_SEGMENTS, segment_focus=focus)
    for q in MASS_QUANTILES:
        yield _d("index_mass_quantile", q=q)
    for ql in CHANGE_QUANTILE_LEVELS:
        for qh in CHANGE_QUANTILE_LEVELS:
            if ql >= qh:
                continue
            for isabs in (False, True):
                for f_agg in ("mean", "var"):
                    yield _d("change_quantiles", ql=ql, qh=qh, isabs=isabs, f_agg=f_agg)
    for m in (-1, 0, 1):
        yield _d("number_crossing_m", m=m)
    yield _d("count_above", t=0)
    yield _d("count_below", t=0)
    yield _d("variation_coefficient")
    yield _d("mean_second_derivative_central")
    for name in (
        "percentage_of_reoccurring_datapoints_to_all_datapoints",
        "percentage_of_reoccurring_values_to_all_values",
        "sum_of_reoccurring_values",
        "sum_of_reoccurring_data_points",
    ):
        yield _d(name)
    for f_agg in ("mean", "median", "var"):
        yield _d("agg_autocorrelation", f_agg=f_agg, maxlag=40)


def _expensive_families(W: int) -> Iterable[FeatureDescriptor]:
    yield _d("sample_entropy", EXPENSIVE, m=2, r=0.2)
    yield _d("approximate_entropy", EXPENSIVE, m=2, r=0.2)
    yield _d("permutation_entropy", EXPENSIVE, order=3, delay=1)


def default_catalog(W: int, expensive: bool = False) -> tuple[FeatureDescriptor, ...]:
    """Expanded catalog for windows of size ``W`` in fixed order.

    For ``W >= 20`` the standard tier has ``STANDARD_SIZE`` columns; smaller
    windows lose FFT coefficients above ``W // 2``.
    """
    if W < 2:
        raise WindowTooSmall(f"window size {W} < 2")
    catalog = list(_core_families(W)) + list(_extension_families(W))
    if expensive:
        catalog += list(_expensive_families(W))
    return tuple(catalog)


STANDARD_SIZE = 204
