"""Per-window feature construction."""

from featad.features.catalog import (
    EXPENSIVE,
    STANDARD,
    STANDARD_SIZE,
    FeatureDescriptor,
    default_catalog,
)
from featad.features.extract import (
    FeatureMatrix,
    compute_feature,
    extract,
    prune,
    read_matrix_csv,
    write_feature_csv,
)
from featad.features.kernels import FEATURES

__all__ = [
    "EXPENSIVE",
    "FEATURES",
    "STANDARD",
    "STANDARD_SIZE",
    "FeatureDescriptor",
    "FeatureMatrix",
    "compute_feature",
    "default_catalog",
    "extract",
    "prune",
    "read_matrix_csv",
    "write_feature_csv",
]
