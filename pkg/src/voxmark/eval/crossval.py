"""
Cross-Validation Module - voxmark
---------------------------------
Per fold: winsorize with training bounds, fit gender norm stats, normalize,
optionally keep the top-k ANOVA-ranked features, train, score the held-out
rows. Folds run through the worker pool and are reduced in fold order.
"""
import logging
from dataclasses import dataclass, field
from typing import Any, Dict, List, Mapping, Optional, Tuple

import numpy as np

from ..errors import FoldError, InputError, SingleClass
from ..features.norm import NormStats, fit_norm_arrays, normalize_array
from ..features.outliers import OutlierBounds, fit_outlier_bounds, winsorize
from ..learn.data import LabeledSet
from ..learn.model import TrainedModel
from ..learn.registry import fit_model
from ..stats.ranking import FeatureRanking, rank_arrays
from ..workers import run_jobs
from .folds import FoldPlan
from .metrics import Metrics, RocCurve, compute_metrics, roc_auc

log = logging.getLogger(__name__)

SCOPES = ("train", "all")
SUMMARY_METRICS = ("accuracy", "precision", "recall")


@dataclass(frozen=True)
class ModelSpec:
    name: str
    params: Mapping[str, Any] = field(default_factory=dict)

    def fit(self, data: LabeledSet) -> TrainedModel:
        return fit_model(self.name, data, self.params)


@dataclass(frozen=True)
class CVOptions:
    """`norm_scope` / `rank_scope` choose whether outlier bounds, norm stats
    and feature ranking see only training rows or the whole data set."""

    norm_scope: str = "train"
    rank_scope: str = "train"
    outlier_k: float = 3.0
    jobs: int = 1

    def __post_init__(self):
        for name in ("norm_scope", "rank_scope"):
            if getattr(self, name) not in SCOPES:
                raise ValueError(f"{name} must be one of {SCOPES}")


@dataclass(frozen=True)
class FoldOutcome:
    fold: int
    n_train: int
    n_test: int
    metrics: Metrics
    columns: Tuple[str, ...]

    def to_dict(self):
        return {"fold": self.fold, "n_train": self.n_train, "n_test": self.n_test,
                "columns": list(self.columns), **self.metrics.to_dict()}


@dataclass(frozen=True)
class CVResult:
    model: str
    plan: dict
    folds: Tuple[FoldOutcome, ...]
    mean: Dict[str, Optional[float]]
    std: Dict[str, Optional[float]]
    undefined_precision_folds: int
    scores: np.ndarray  # pooled out-of-fold P(positive), row order
    roc: Optional[RocCurve]
    warnings: Tuple[str, ...] = ()

    @property
    def accuracy(self) -> float:
        return self.mean["accuracy"]

    def to_dict(self):
        doc = {
            "model": self.model,
            "fold_plan": self.plan,
            "folds": [f.to_dict() for f in self.folds],
            "mean": dict(self.mean),
            "std": dict(self.std),
            "undefined_precision_folds": self.undefined_precision_folds,
            "auc": None if self.roc is None else self.roc.auc,
            "roc": None if self.roc is None else [list(p) for p in self.roc.points],
        }
        if self.warnings:
            doc["warnings"] = list(self.warnings)
        return doc


# ── Preparation ───────────────────────────────────────────────────────────────
def gender_array(data: LabeledSet) -> np.ndarray:
    if data.genders is None:
        return np.full(len(data), "all")
    return data.genders


def fit_preparation(vectors, genders, columns, outlier_k: float) -> Tuple[OutlierBounds, NormStats]:
    bounds = fit_outlier_bounds(vectors, outlier_k)
    stats = fit_norm_arrays(winsorize(vectors, bounds), genders, columns)
    return bounds, stats


def prepare(vectors, genders, bounds: OutlierBounds, stats: NormStats) -> np.ndarray:
    return normalize_array(winsorize(vectors, bounds), genders, stats)


def normalized_all(data: LabeledSet, outlier_k: float) -> np.ndarray:
    genders = gender_array(data)
    bounds, stats = fit_preparation(data.vectors, genders, data.columns, outlier_k)
    return prepare(data.vectors, genders, bounds, stats)


def selected_columns(ranking: FeatureRanking, columns, top_k: int) -> np.ndarray:
    """Indices of the top-k ranked features, in the original column order."""
    keep = set(ranking.top(top_k))
    return np.array([j for j, name in enumerate(columns) if name in keep], dtype=np.int64)


# ── Folds ─────────────────────────────────────────────────────────────────────
@dataclass(frozen=True)
class _FoldJob:
    data: LabeledSet
    spec: ModelSpec
    fold: int
    train: np.ndarray
    test: np.ndarray
    top_k: Optional[int]
    outlier_k: float
    shared: Optional[Tuple[OutlierBounds, NormStats]]
    shared_ranking: Optional[FeatureRanking]


def _run_fold(job: _FoldJob) -> Tuple[np.ndarray, Metrics, Tuple[str, ...]]:
    data = job.data
    genders = gender_array(data)
    if job.shared is not None:
        bounds, stats = job.shared
    else:
        bounds, stats = fit_preparation(data.vectors[job.train], genders[job.train],
                                        data.columns, job.outlier_k)
    train_x = prepare(data.vectors[job.train], genders[job.train], bounds, stats)
    test_x = prepare(data.vectors[job.test], genders[job.test], bounds, stats)

    columns = data.columns
    if job.top_k is not None and job.top_k < data.n_features:
        ranking = job.shared_ranking or rank_arrays(train_x, data.labels[job.train], data.columns)
        keep = selected_columns(ranking, data.columns, job.top_k)
        train_x, test_x = train_x[:, keep], test_x[:, keep]
        columns = tuple(data.columns[j] for j in keep)

    train_set = data.take(job.train).with_vectors(train_x, columns)
    model = job.spec.fit(train_set)
    scores = model.predict_proba(test_x)
    metrics = compute_metrics(scores >= 0.5, data.labels[job.test])
    return scores, metrics, columns


def _spread(values: List[float]) -> Tuple[Optional[float], Optional[float]]:
    if not values:
        return None, None
    arr = np.asarray(values, dtype=np.float64)
    std = float(arr.std(ddof=1)) if arr.size > 1 else 0.0
    return float(arr.mean()), std


def cross_validate(data: LabeledSet, spec: ModelSpec, plan: FoldPlan,
                   options: CVOptions = CVOptions(), top_k: Optional[int] = None) -> CVResult:
    """Mean and sample SD of the fold metrics plus the ROC of the pooled
    out-of-fold scores. A failing fold raises FoldError naming model and fold."""
    if plan.assignment.shape != (len(data),):
        raise ValueError(f"fold plan covers {plan.assignment.size} rows, data has {len(data)}")

    shared = shared_ranking = None
    if options.norm_scope == "all":
        shared = fit_preparation(data.vectors, gender_array(data), data.columns, options.outlier_k)
    if top_k is not None and top_k < data.n_features and options.rank_scope == "all":
        shared_ranking = rank_arrays(normalized_all(data, options.outlier_k), data.labels, data.columns)

    jobs = [
        _FoldJob(data, spec, fold, train, test, top_k, options.outlier_k, shared, shared_ranking)
        for fold, train, test in plan.splits()
    ]
    results = run_jobs(_run_fold, jobs, options.jobs)

    scores = np.full(len(data), np.nan)
    outcomes = []
    for job, result in zip(jobs, results):
        if not result["ok"]:
            error = result["error"]
            if isinstance(error, InputError):
                raise error
            log.warning("%s failed on fold %d: %s", spec.name, job.fold, error)
            raise FoldError(spec.name, job.fold, error) from error
        fold_scores, metrics, columns = result["value"]
        scores[job.test] = fold_scores
        outcomes.append(FoldOutcome(job.fold, job.train.size, job.test.size, metrics, columns))

    mean, std = {}, {}
    for name in SUMMARY_METRICS:
        values = [getattr(o.metrics, name) for o in outcomes]
        mean[name], std[name] = _spread([v for v in values if v is not None])
    undefined = sum(o.metrics.precision is None for o in outcomes)

    warnings = []
    if undefined:
        warnings.append(f"{spec.name}: precision undefined on {undefined} fold(s) "
                        "without positive predictions")
    try:
        roc = roc_auc(scores, data.labels)
    except SingleClass:
        roc = None
        warnings.append(f"{spec.name}: ROC skipped, only one class present")

    log.info("%s: accuracy %.3f +/- %.3f over %d folds", spec.name,
             mean["accuracy"], std["accuracy"], plan.k)
    return CVResult(
        model=spec.name,
        plan=plan.summary(data.labels),
        folds=tuple(outcomes),
        mean=mean,
        std=std,
        undefined_precision_folds=undefined,
        scores=scores,
        roc=roc,
        warnings=tuple(warnings),
    )
