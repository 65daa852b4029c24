"""
Outliers Module - voxmark
-------------------------
k-SD outlier policy per feature column: mark the value missing or winsorize
it to the mean +/- k*SD boundary.
"""
import logging
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from ..errors import TooFewRows
from .matrix import FeatureMatrix

log = logging.getLogger(__name__)

OUTLIER_MODES = ("exclude_value", "clip")


@dataclass(frozen=True)
class OutlierBounds:
    lower: np.ndarray
    upper: np.ndarray


@dataclass(frozen=True)
class OutlierReport:
    mode: str
    k: float
    affected: Tuple[Tuple[str, str, float], ...]  # (recording_id, feature, original value)

    def __len__(self):
        return len(self.affected)

    def to_records(self):
        return [{"recording_id": r, "feature": f, "value": v} for r, f, v in self.affected]


def fit_outlier_bounds(values, k: float = 3.0) -> OutlierBounds:
    """mean +/- k * population SD per column; a zero-SD column has no outliers."""
    values = np.asarray(values, dtype=np.float64)
    mean = np.nanmean(values, axis=0)
    std = np.nanstd(values, axis=0)
    return OutlierBounds(mean - k * std, mean + k * std)


def outlier_mask(values, bounds: OutlierBounds) -> np.ndarray:
    values = np.asarray(values, dtype=np.float64)
    return (values < bounds.lower) | (values > bounds.upper)


def winsorize(values, bounds: OutlierBounds) -> np.ndarray:
    return np.clip(np.asarray(values, dtype=np.float64), bounds.lower, bounds.upper)


def apply_outlier_policy(matrix: FeatureMatrix, k: float = 3.0,
                         mode: str = "clip") -> Tuple[FeatureMatrix, OutlierReport]:
    if mode not in OUTLIER_MODES:
        raise ValueError(f"outlier mode must be one of {OUTLIER_MODES}, got {mode!r}")
    if len(matrix) < 3:
        raise TooFewRows(f"outlier policy needs at least 3 rows, got {len(matrix)}")

    values = matrix.values
    bounds = fit_outlier_bounds(values, k)
    mask = outlier_mask(values, bounds)
    rows, cols = np.nonzero(mask)
    affected = tuple(
        (matrix.metas[i].recording_id, matrix.columns[j], float(values[i, j]))
        for i, j in zip(rows.tolist(), cols.tolist())
    )
    if mode == "clip":
        cleaned = winsorize(values, bounds)
    else:
        cleaned = np.where(mask, np.nan, values)
    if affected:
        log.info("%s: %d value(s) beyond %.1f SD", mode, len(affected), k)
    return matrix.with_values(cleaned), OutlierReport(mode, float(k), affected)
