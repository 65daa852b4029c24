"""
Comparisons Module - voxmark
----------------------------
The hypothesis-driven tables: LSA vs HSA one-way ANOVAs on speaker means and
refusal vs consent paired t-tests on per-speaker utterance-type means.
"""
import logging
from typing import List, Tuple

import numpy as np

from ..corpus.types import Gender, SAGroup, UtteranceType
from ..errors import AnalysisError, TooFewSamples
from ..features.describe import speaker_means
from ..features.matrix import FeatureMatrix
from ..features.outliers import apply_outlier_policy
from .inference import anova_oneway, group_descriptives, paired_t

log = logging.getLogger(__name__)

GROUP_FEATURES = (
    "mean_f0", "std_f0", "intensity_mean", "intensity_std",
    "jitter", "shimmer", "relative_silence", "prompt_to_start",
)
GENDER_SPLIT_FEATURES = ("mean_f0",)
UTTERANCE_FEATURES = ("std_f0", "intensity_mean", "intensity_std", "jitter", "shimmer")


def group_comparisons(matrix: FeatureMatrix, split_by_gender: bool = False,
                      outlier_k: float = 3.0, outlier_mode: str = "exclude_value") -> Tuple[List[dict], List[str]]:
    """LSA vs HSA ANOVA per feature on speaker means.

    Outlying recording values (beyond outlier_k SD) are dropped, or clipped
    with outlier_mode="clip", before averaging. Excluded-range speakers take
    no part.
    """
    warnings: List[str] = []
    if len(matrix) >= 3:
        matrix, report = apply_outlier_policy(matrix, outlier_k, outlier_mode)
        if len(report):
            warnings.append(f"{len(report)} outlying value(s) beyond {outlier_k} SD ({outlier_mode})")
    speakers = speaker_means(matrix)
    groups = speakers.sa_groups
    if not (groups == SAGroup.LSA.value).any() or not (groups == SAGroup.HSA.value).any():
        raise TooFewSamples("LSA vs HSA comparison needs speakers in both groups")

    records = []
    for feature in GROUP_FEATURES:
        if feature not in speakers.columns:
            continue
        if split_by_gender or feature in GENDER_SPLIT_FEATURES:
            subsets = [(g.value, speakers.genders == g.value) for g in (Gender.FEMALE, Gender.MALE)]
        else:
            subsets = [(None, np.ones(len(speakers), dtype=bool))]
        for gender, rows in subsets:
            label = f"LSA vs HSA ({gender})" if gender else "LSA vs HSA"
            column = speakers.column(feature)
            samples = {
                name: _present(column[rows & (groups == name)])
                for name in (SAGroup.LSA.value, SAGroup.HSA.value)
            }
            try:
                result = anova_oneway(list(samples.values()))
            except AnalysisError as e:
                warnings.append(f"{feature} {label}: skipped ({e})")
                log.warning("%s %s skipped: %s", feature, label, e)
                continue
            records.append({
                "feature": feature,
                "comparison": label,
                "test": "anova",
                "statistic": result.f_value,
                "effect_size": result.eta_squared,
                "p": result.p_value,
                "df": [result.df_between, result.df_within],
                "groups": {name: group_descriptives(s) for name, s in samples.items()},
            })
    return records, warnings


def utterance_comparisons(matrix: FeatureMatrix) -> Tuple[List[dict], List[str]]:
    """Refusal vs consent paired t-test per feature over speakers that have both."""
    warnings: List[str] = []
    types = set(matrix.utterance_types.tolist())
    if not {UtteranceType.REFUSAL.value, UtteranceType.CONSENT.value} <= types:
        warnings.append("refusal vs consent comparison skipped: both utterance types are needed")
        return [], warnings

    refusal = speaker_means(matrix, UtteranceType.REFUSAL)
    consent = speaker_means(matrix, UtteranceType.CONSENT)
    shared = sorted(set(refusal.speaker_ids.tolist()) & set(consent.speaker_ids.tolist()))
    r_rows = [refusal.speaker_ids.tolist().index(s) for s in shared]
    c_rows = [consent.speaker_ids.tolist().index(s) for s in shared]

    records = []
    for feature in UTTERANCE_FEATURES:
        a = refusal.column(feature)[r_rows]
        b = consent.column(feature)[c_rows]
        keep = ~(np.isnan(a) | np.isnan(b))
        try:
            result = paired_t(a[keep], b[keep])
        except AnalysisError as e:
            warnings.append(f"{feature} refusal vs consent: skipped ({e})")
            log.warning("%s refusal vs consent skipped: %s", feature, e)
            continue
        records.append({
            "feature": feature,
            "comparison": "refusal vs consent",
            "test": "paired_t",
            "statistic": result.t_value,
            "effect_size": result.cohens_d,
            "p": result.p_value,
            "df": [result.df],
            "groups": {
                UtteranceType.REFUSAL.value: group_descriptives(a[keep]),
                UtteranceType.CONSENT.value: group_descriptives(b[keep]),
            },
        })
    return records, warnings


def _present(values):
    return values[~np.isnan(values)]
