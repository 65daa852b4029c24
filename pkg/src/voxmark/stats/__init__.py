from .comparisons import GROUP_FEATURES, UTTERANCE_FEATURES, group_comparisons, utterance_comparisons
from .inference import (
    AnovaResult,
    PairedTResult,
    anova_oneway,
    f_survival,
    group_descriptives,
    paired_t,
    t_two_sided,
)
from .ranking import FeatureRanking, rank_arrays, rank_features_anova

__all__ = [
    "AnovaResult",
    "FeatureRanking",
    "GROUP_FEATURES",
    "PairedTResult",
    "UTTERANCE_FEATURES",
    "anova_oneway",
    "f_survival",
    "group_comparisons",
    "group_descriptives",
    "paired_t",
    "rank_arrays",
    "rank_features_anova",
    "t_two_sided",
    "utterance_comparisons",
]
