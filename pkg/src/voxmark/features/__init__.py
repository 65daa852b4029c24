from .describe import describe_by_gender, speaker_means
from .extract import Rejection, extract_corpus
from .matrix import META_COLUMNS, FeatureMatrix, read_feature_matrix, write_feature_matrix
from .norm import NormStats, fit_norm_arrays, fit_norm_stats, normalize, normalize_array
from .outliers import (
    OUTLIER_MODES,
    OutlierBounds,
    OutlierReport,
    apply_outlier_policy,
    fit_outlier_bounds,
    winsorize,
)
from .vector import FEATURE_NAMES, FeatureVector, analyze_clip, compute_features, count_voice_breaks

__all__ = [
    "FEATURE_NAMES",
    "FeatureMatrix",
    "FeatureVector",
    "META_COLUMNS",
    "NormStats",
    "OUTLIER_MODES",
    "OutlierBounds",
    "OutlierReport",
    "Rejection",
    "analyze_clip",
    "apply_outlier_policy",
    "compute_features",
    "count_voice_breaks",
    "describe_by_gender",
    "extract_corpus",
    "fit_norm_arrays",
    "fit_norm_stats",
    "fit_outlier_bounds",
    "normalize",
    "normalize_array",
    "read_feature_matrix",
    "speaker_means",
    "winsorize",
    "write_feature_matrix",
]
