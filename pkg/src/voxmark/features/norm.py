"""
Norm Module - voxmark
---------------------
Gender-based z-normalization: per-gender, per-feature mean and sample SD
fitted on a training subset.
"""
from dataclasses import dataclass
from typing import Dict, Optional, Sequence, Tuple

import numpy as np

from ..errors import DegenerateGenderGroup, UnknownGender
from .matrix import FeatureMatrix

DEGENERATE_RTOL = 1e-12


@dataclass(frozen=True)
class NormStats:
    columns: Tuple[str, ...]
    means: Dict[str, np.ndarray]
    stds: Dict[str, np.ndarray]

    @property
    def genders(self) -> Tuple[str, ...]:
        return tuple(sorted(self.means))

    def degenerate(self, gender: str) -> np.ndarray:
        """Columns with (numerically) zero spread for this gender."""
        mean, std = self._lookup(gender)
        return std <= DEGENERATE_RTOL * np.maximum(1.0, np.abs(mean))

    def _lookup(self, gender):
        gender = getattr(gender, "value", gender)
        if gender not in self.means:
            raise UnknownGender(f"no normalization statistics for gender {gender!r}")
        return self.means[gender], self.stds[gender]

    def to_dict(self) -> dict:
        return {
            "columns": list(self.columns),
            "means": {g: self.means[g].tolist() for g in self.genders},
            "stds": {g: self.stds[g].tolist() for g in self.genders},
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "NormStats":
        return cls(
            columns=tuple(doc["columns"]),
            means={g: np.asarray(v, dtype=np.float64) for g, v in doc["means"].items()},
            stds={g: np.asarray(v, dtype=np.float64) for g, v in doc["stds"].items()},
        )


def fit_norm_arrays(values, genders, columns: Sequence[str]) -> NormStats:
    values = np.asarray(values, dtype=np.float64)
    genders = np.asarray(genders)
    if genders.size == 0:
        raise DegenerateGenderGroup("no training rows to fit normalization statistics")
    means, stds = {}, {}
    for gender in sorted(set(genders.tolist())):
        block = values[genders == gender]
        if block.shape[0] < 2:
            raise DegenerateGenderGroup(
                f"gender {gender!r} has {block.shape[0]} training row(s); need at least 2")
        means[gender] = block.mean(axis=0)
        stds[gender] = block.std(axis=0, ddof=1)
    return NormStats(tuple(columns), means, stds)


def fit_norm_stats(matrix: FeatureMatrix, rows: Optional[Sequence[int]] = None) -> NormStats:
    """Fit on `rows` (all rows when None)."""
    subset = matrix if rows is None else matrix.take(rows)
    return fit_norm_arrays(subset.values, subset.genders, matrix.columns)


def normalize_array(values, genders, stats: NormStats) -> np.ndarray:
    values = np.asarray(values, dtype=np.float64)
    genders = np.asarray(genders)
    out = np.empty_like(values)
    for gender in sorted(set(genders.tolist())):
        mean, std = stats._lookup(gender)
        flat = stats.degenerate(gender)
        rows = genders == gender
        z = (values[rows] - mean) / np.where(flat, 1.0, std)
        z[:, flat] = 0.0
        out[rows] = z
    return out


def normalize(matrix: FeatureMatrix, stats: NormStats) -> FeatureMatrix:
    if tuple(stats.columns) != tuple(matrix.columns):
        raise ValueError("normalization statistics were fitted on different columns")
    return matrix.with_values(normalize_array(matrix.values, matrix.genders, stats))
