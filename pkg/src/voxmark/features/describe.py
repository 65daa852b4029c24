"""
Describe Module - voxmark
-------------------------
Descriptive tables over a feature matrix and speaker-level aggregation.
"""
from typing import Optional

import numpy as np
import pandas as pd

from ..corpus.types import RecordingMeta, UtteranceType
from ..errors import TooFewRows
from .matrix import FeatureMatrix


def describe_by_gender(matrix: FeatureMatrix) -> pd.DataFrame:
    """Tidy table with columns feature, gender, mean, sd, n (sample SD, NaNs skipped)."""
    frame = pd.DataFrame(matrix.values, columns=list(matrix.columns))
    frame["gender"] = matrix.genders
    long = frame.melt(id_vars="gender", var_name="feature")
    table = (long.groupby(["feature", "gender"], sort=False)["value"]
             .agg(mean="mean", sd="std", n="count")
             .reset_index())
    order = {name: i for i, name in enumerate(matrix.columns)}
    table["_order"] = table["feature"].map(order)
    return (table.sort_values(["_order", "gender"], kind="mergesort")
            .drop(columns="_order")
            .reset_index(drop=True))


def speaker_means(matrix: FeatureMatrix, utterance_type: Optional[UtteranceType] = None) -> FeatureMatrix:
    """One row per speaker (sorted by id): NaN-skipping mean of the speaker's rows.

    With `utterance_type`, only that type's rows are averaged and speakers
    without such rows are dropped.
    """
    if utterance_type is not None:
        keep = matrix.utterance_types == UtteranceType(utterance_type).value
        if not keep.any():
            raise TooFewRows(f"no {UtteranceType(utterance_type).value} rows")
        matrix = matrix.take(keep)

    frame = pd.DataFrame(matrix.values, columns=list(matrix.columns))
    frame["speaker_id"] = matrix.speaker_ids
    means = frame.groupby("speaker_id", sort=True).mean()

    first = {}
    for meta in matrix.metas:
        first.setdefault(meta.speaker_id, meta)
    metas = tuple(
        RecordingMeta(
            recording_id=speaker,
            speaker_id=speaker,
            gender=first[speaker].gender,
            lsas_score=first[speaker].lsas_score,
            utterance_type=utterance_type or UtteranceType.UNKNOWN,
        )
        for speaker in means.index
    )
    return FeatureMatrix(metas, means[list(matrix.columns)].to_numpy(dtype=np.float64), matrix.columns)
