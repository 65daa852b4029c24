from .crossval import CVOptions, CVResult, FoldOutcome, ModelSpec, cross_validate
from .experiments import (
    GenderConfigurations,
    SweepPoint,
    SweepResult,
    TransferMatrix,
    gender_configurations,
    gender_sweeps,
    sa_dataset,
    split_by_utterance_eval,
    sweep_feature_count,
    transfer_accuracy,
    utterance_dataset,
    utterance_type_classification,
)
from .folds import FOLD_MODES, FoldPlan, FoldSettings, make_folds
from .metrics import Metrics, RocCurve, compute_metrics, rank_auc, roc_auc

__all__ = [
    "CVOptions",
    "CVResult",
    "FOLD_MODES",
    "FoldOutcome",
    "FoldPlan",
    "FoldSettings",
    "GenderConfigurations",
    "Metrics",
    "ModelSpec",
    "RocCurve",
    "SweepPoint",
    "SweepResult",
    "TransferMatrix",
    "compute_metrics",
    "cross_validate",
    "gender_configurations",
    "gender_sweeps",
    "make_folds",
    "rank_auc",
    "roc_auc",
    "sa_dataset",
    "split_by_utterance_eval",
    "sweep_feature_count",
    "transfer_accuracy",
    "utterance_dataset",
    "utterance_type_classification",
]
