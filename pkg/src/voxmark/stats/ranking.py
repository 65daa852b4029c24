"""ANOVA-F feature ranking for a binary grouping."""
from dataclasses import dataclass
from typing import Sequence, Tuple

import numpy as np

from ..errors import LengthMismatch
from ..features.matrix import FeatureMatrix
from .inference import anova_oneway


@dataclass(frozen=True)
class FeatureRanking:
    entries: Tuple[Tuple[str, float], ...]  # (feature, F), best first

    @property
    def names(self) -> Tuple[str, ...]:
        return tuple(name for name, _ in self.entries)

    def top(self, k: int) -> Tuple[str, ...]:
        return self.names[:k]

    def to_records(self):
        return [{"rank": i + 1, "feature": name, "f_value": f}
                for i, (name, f) in enumerate(self.entries)]


def rank_arrays(values, labels, columns: Sequence[str]) -> FeatureRanking:
    """Descending F; equal F keeps the column order. Missing values are skipped per feature."""
    values = np.asarray(values, dtype=np.float64)
    labels = np.asarray(labels).astype(bool)
    scores = []
    for j in range(values.shape[1]):
        column = values[:, j]
        present = ~np.isnan(column)
        groups = [column[present & ~labels], column[present & labels]]
        scores.append(anova_oneway(groups).f_value)
    order = sorted(range(len(columns)), key=lambda j: (-scores[j], j))
    return FeatureRanking(tuple((columns[j], float(scores[j])) for j in order))


def rank_features_anova(matrix: FeatureMatrix, labels) -> FeatureRanking:
    labels = np.asarray(labels)
    if labels.shape[0] != len(matrix):
        raise LengthMismatch(f"{labels.shape[0]} labels for {len(matrix)} rows")
    return rank_arrays(matrix.values, labels, matrix.columns)
