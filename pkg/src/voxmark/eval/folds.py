"""
Folds Module - voxmark
----------------------
Seeded k-fold plans over recordings or speakers, optionally stratified by
label.
"""
from dataclasses import dataclass
from typing import Iterator, Tuple

import numpy as np

from ..errors import TooFewGroups
from ..learn.data import LabeledSet

FOLD_MODES = ("per_recording", "per_speaker")


@dataclass(frozen=True)
class FoldPlan:
    k: int
    assignment: np.ndarray  # row -> fold index
    mode: str
    stratified: bool

    def test_rows(self, fold: int) -> np.ndarray:
        return np.flatnonzero(self.assignment == fold)

    def train_rows(self, fold: int) -> np.ndarray:
        return np.flatnonzero(self.assignment != fold)

    def splits(self) -> Iterator[Tuple[int, np.ndarray, np.ndarray]]:
        for fold in range(self.k):
            yield fold, self.train_rows(fold), self.test_rows(fold)

    def summary(self, labels=None) -> dict:
        sizes = np.bincount(self.assignment, minlength=self.k)
        doc = {"k": self.k, "mode": self.mode, "stratified": self.stratified,
               "fold_sizes": sizes.tolist()}
        if labels is not None:
            labels = np.asarray(labels)
            doc["fold_positives"] = [int(labels[self.assignment == f].sum()) for f in range(self.k)]
        return doc


@dataclass(frozen=True)
class FoldSettings:
    """How to build a plan for any subset of the data."""

    k: int = 10
    mode: str = "per_speaker"
    stratified: bool = True
    seed: int = 0

    def plan(self, data: LabeledSet) -> FoldPlan:
        return make_folds(data, self.k, self.mode, self.stratified, self.seed)


def make_folds(data: LabeledSet, k: int = 10, mode: str = "per_speaker",
               stratified: bool = True, seed: int = 0) -> FoldPlan:
    if mode not in FOLD_MODES:
        raise ValueError(f"fold mode must be one of {FOLD_MODES}, got {mode!r}")
    if k < 2:
        raise TooFewGroups(f"need at least 2 folds, got {k}")

    if mode == "per_speaker":
        if data.groups is None:
            raise TooFewGroups("speaker-grouped folds need speaker ids")
        units, row_unit = np.unique(data.groups, return_inverse=True)
        positives = np.bincount(row_unit, weights=data.labels, minlength=units.size)
        totals = np.bincount(row_unit, minlength=units.size)
        unit_labels = (positives * 2 >= totals).astype(np.int64)
        kind = "speakers"
    else:
        row_unit = np.arange(len(data))
        unit_labels = data.labels
        kind = "recordings"
    n_units = unit_labels.size
    if n_units < k:
        raise TooFewGroups(f"{n_units} {kind} cannot fill {k} folds")

    rng = np.random.default_rng(seed)
    if stratified:
        order = np.concatenate([
            rng.permutation(np.flatnonzero(unit_labels == 1)),
            rng.permutation(np.flatnonzero(unit_labels == 0)),
        ])
    else:
        order = rng.permutation(n_units)
    unit_fold = np.empty(n_units, dtype=np.int64)
    unit_fold[order] = np.arange(n_units) % k
    unit_fold = rng.permutation(k)[unit_fold]
    return FoldPlan(k, unit_fold[row_unit], mode, stratified)
