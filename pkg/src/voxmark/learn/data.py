"""Training data for the classifiers."""
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from ..errors import EmptyTrainingSet, LengthMismatch


@dataclass(frozen=True)
class LabeledSet:
    """n x d vectors with binary labels (1 = positive class).

    `groups` holds the speaker id of every row, `genders` its gender; both
    are used for folding and normalization only.
    """

    vectors: np.ndarray
    labels: np.ndarray
    groups: Optional[np.ndarray] = None
    genders: Optional[np.ndarray] = None
    columns: Tuple[str, ...] = ()

    def __post_init__(self):
        vectors = np.array(self.vectors, dtype=np.float64)
        if vectors.ndim == 1:
            vectors = vectors[:, None]
        labels = np.array(self.labels).astype(bool).astype(np.int64)
        if vectors.ndim != 2 or vectors.shape[0] == 0:
            raise EmptyTrainingSet("labeled set needs at least one row")
        n = vectors.shape[0]
        if labels.shape != (n,):
            raise LengthMismatch(f"{labels.size} labels for {n} rows")
        groups = None if self.groups is None else np.asarray(self.groups).astype(str)
        genders = None if self.genders is None else np.asarray(self.genders).astype(str)
        for name, extra in (("groups", groups), ("genders", genders)):
            if extra is not None and extra.shape != (n,):
                raise LengthMismatch(f"{name} must have one entry per row")
        columns = tuple(self.columns) or tuple(f"x{j}" for j in range(vectors.shape[1]))
        if len(columns) != vectors.shape[1]:
            raise LengthMismatch(f"{len(columns)} column names for {vectors.shape[1]} columns")
        for array in (vectors, labels):
            array.setflags(write=False)
        object.__setattr__(self, "vectors", vectors)
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "groups", groups)
        object.__setattr__(self, "genders", genders)
        object.__setattr__(self, "columns", columns)

    def __len__(self):
        return self.vectors.shape[0]

    @property
    def n_features(self) -> int:
        return self.vectors.shape[1]

    @property
    def has_both_labels(self) -> bool:
        return 0 < int(self.labels.sum()) < len(self)

    def take(self, rows) -> "LabeledSet":
        rows = np.asarray(rows)
        return LabeledSet(
            self.vectors[rows],
            self.labels[rows],
            None if self.groups is None else self.groups[rows],
            None if self.genders is None else self.genders[rows],
            self.columns,
        )

    def with_vectors(self, vectors, columns=None) -> "LabeledSet":
        return LabeledSet(vectors, self.labels, self.groups, self.genders,
                          self.columns if columns is None else columns)

    def with_labels(self, labels) -> "LabeledSet":
        return LabeledSet(self.vectors, labels, self.groups, self.genders, self.columns)

    def flipped(self) -> "LabeledSet":
        return self.with_labels(1 - self.labels)
