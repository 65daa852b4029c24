"""
Matrix Module - voxmark
-----------------------
Feature matrix: one row of labels plus the 18 features per utterance, and its
CSV form.
"""
import logging
import os
from dataclasses import dataclass
from typing import Iterable, Sequence, Tuple

import numpy as np
import pandas as pd

from ..corpus.types import Gender, RecordingMeta, UtteranceType
from ..errors import MalformedManifest, TooFewRows
from .vector import FEATURE_NAMES, FeatureVector

log = logging.getLogger(__name__)

META_COLUMNS = ("recording_id", "speaker_id", "gender", "lsas_score", "sa_group", "utterance_type")
FLOAT_FORMAT = "%.6g"


@dataclass(frozen=True)
class FeatureMatrix:
    metas: Tuple[RecordingMeta, ...]
    values: np.ndarray
    columns: Tuple[str, ...] = FEATURE_NAMES

    def __post_init__(self):
        metas = tuple(self.metas)
        values = np.array(self.values, dtype=np.float64)
        columns = tuple(self.columns)
        if not metas:
            raise TooFewRows("feature matrix needs at least one row")
        if values.shape != (len(metas), len(columns)):
            raise ValueError(f"values shape {values.shape} does not match "
                             f"{len(metas)} rows x {len(columns)} columns")
        values.setflags(write=False)
        object.__setattr__(self, "metas", metas)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "columns", columns)

    @classmethod
    def from_vectors(cls, rows: Iterable[Tuple[RecordingMeta, FeatureVector]]) -> "FeatureMatrix":
        rows = list(rows)
        if not rows:
            raise TooFewRows("feature matrix needs at least one row")
        return cls(tuple(m for m, _ in rows), np.vstack([v.as_array() for _, v in rows]))

    def __len__(self):
        return len(self.metas)

    @property
    def genders(self) -> np.ndarray:
        return np.array([m.gender.value for m in self.metas])

    @property
    def speaker_ids(self) -> np.ndarray:
        return np.array([m.speaker_id for m in self.metas])

    @property
    def sa_groups(self) -> np.ndarray:
        return np.array([m.sa_group.value for m in self.metas])

    @property
    def utterance_types(self) -> np.ndarray:
        return np.array([m.utterance_type.value for m in self.metas])

    def column(self, name: str) -> np.ndarray:
        return self.values[:, self.columns.index(name)]

    def vector(self, row: int) -> FeatureVector:
        if self.columns != FEATURE_NAMES:
            raise ValueError("vector() needs the full canonical column set")
        return FeatureVector.from_array(self.values[row])

    def take(self, rows) -> "FeatureMatrix":
        rows = np.asarray(rows)
        if rows.dtype == bool:
            rows = np.flatnonzero(rows)
        return FeatureMatrix(tuple(self.metas[i] for i in rows), self.values[rows], self.columns)

    def select(self, names: Sequence[str]) -> "FeatureMatrix":
        unknown = [n for n in names if n not in self.columns]
        if unknown:
            raise KeyError(f"unknown feature(s): {', '.join(unknown)}")
        idx = [self.columns.index(n) for n in names]
        return FeatureMatrix(self.metas, self.values[:, idx], tuple(names))

    def with_values(self, values) -> "FeatureMatrix":
        return FeatureMatrix(self.metas, values, self.columns)

    def to_frame(self) -> pd.DataFrame:
        meta = pd.DataFrame(
            [(m.recording_id, m.speaker_id, m.gender.value, m.lsas_score, m.sa_group.value,
              m.utterance_type.value) for m in self.metas],
            columns=list(META_COLUMNS))
        return pd.concat([meta, pd.DataFrame(self.values, columns=list(self.columns))], axis=1)


def write_feature_matrix(path, matrix: FeatureMatrix) -> None:
    from ..reporter import write_csv_atomic

    write_csv_atomic(path, matrix.to_frame(), float_format=FLOAT_FORMAT)
    log.info("wrote %d x %d feature matrix to %s", len(matrix), len(matrix.columns), path)


def read_feature_matrix(path) -> FeatureMatrix:
    path = os.fspath(path)
    try:
        frame = pd.read_csv(path, dtype={c: str for c in META_COLUMNS}, keep_default_na=False)
    except FileNotFoundError as e:
        raise MalformedManifest(f"feature matrix not found: {path}") from e
    except (pd.errors.ParserError, pd.errors.EmptyDataError) as e:
        raise MalformedManifest(f"{path}: {e}") from e

    missing = [c for c in META_COLUMNS if c not in frame.columns]
    features = tuple(c for c in frame.columns if c not in META_COLUMNS)
    unknown = [c for c in features if c not in FEATURE_NAMES]
    if missing or unknown or not features:
        raise MalformedManifest(f"{path}: bad feature matrix header {list(frame.columns)}")
    if frame.empty:
        raise TooFewRows(f"{path}: feature matrix has no rows")

    metas = []
    for line, row in enumerate(frame.itertuples(index=False), start=2):
        try:
            metas.append(RecordingMeta(
                recording_id=str(row.recording_id),
                speaker_id=str(row.speaker_id),
                gender=Gender(row.gender),
                lsas_score=int(row.lsas_score),
                utterance_type=UtteranceType(row.utterance_type),
            ))
        except ValueError as e:
            raise MalformedManifest(f"{path}:{line}: {e}") from e
    try:
        values = frame[list(features)].to_numpy(dtype=np.float64)
    except ValueError as e:
        raise MalformedManifest(f"{path}: non-numeric feature value ({e})") from e
    return FeatureMatrix(tuple(metas), values, features)
