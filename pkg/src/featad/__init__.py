"""Window-level anomaly detection for univariate time series.

Series are cut into sliding windows, optionally turned into a table of
per-window features, scored by Isolation Forest or Local Outlier Factor and
evaluated by window-level AUC with rank-based cross-series statistics.
"""

from featad.detectors import ScoreVector, if_fit, if_score, lof_score
from featad.errors import FeatadError
from featad.evaluation import ResultRecord, auc, rank_methods, wilcoxon_signed_rank
from featad.features import FeatureMatrix, default_catalog, extract, prune
from featad.normalize import normalize_feature_columns, normalize_rows
from featad.runner import ExperimentConfig, generate_report, run_experiment, synth_corpus
from featad.series_io import TimeSeries, load_csv, load_ucr
from featad.windowing import WindowMatrix, slice_series, window_count

__version__ = "0.1.0"

__all__ = [
    "ExperimentConfig",
    "FeatadError",
    "FeatureMatrix",
    "ResultRecord",
    "ScoreVector",
    "TimeSeries",
    "WindowMatrix",
    "auc",
    "default_catalog",
    "extract",
    "generate_report",
    "if_fit",
    "if_score",
    "load_csv",
    "load_ucr",
    "lof_score",
    "normalize_feature_columns",
    "normalize_rows",
    "prune",
    "rank_methods",
    "run_experiment",
    "slice_series",
    "synth_corpus",
    "wilcoxon_signed_rank",
    "window_count",
]
