"""
Experiments Module - voxmark
----------------------------
The evaluation grid built on cross_validate: feature-count sweeps, unified
vs gender-specific vs cross-gender configurations, utterance-type splits and
the refusal/consent classifier.
"""
import logging
from dataclasses import dataclass
from typing import Dict, Tuple

import numpy as np

from ..corpus.types import SAGroup, UtteranceType
from ..errors import FoldError, InputError, MissingUtteranceLabels, TooFewGroups, TooFewRows
from ..features.matrix import FeatureMatrix
from ..learn.data import LabeledSet
from ..stats.ranking import FeatureRanking, rank_arrays
from .crossval import CVOptions, CVResult, ModelSpec, cross_validate, fit_preparation, normalized_all, prepare
from .folds import FoldPlan, FoldSettings
from .metrics import compute_metrics

log = logging.getLogger(__name__)

UTTERANCE_TYPES = (UtteranceType.REFUSAL.value, UtteranceType.CONSENT.value)


# ── Data sets ─────────────────────────────────────────────────────────────────
def _labeled(matrix: FeatureMatrix, labels) -> LabeledSet:
    return LabeledSet(matrix.values, labels, matrix.speaker_ids, matrix.genders, matrix.columns)


def sa_dataset(matrix: FeatureMatrix) -> LabeledSet:
    """HSA = 1, LSA = 0; Excluded rows are dropped."""
    groups = matrix.sa_groups
    rows = np.flatnonzero(groups != SAGroup.EXCLUDED.value)
    if rows.size == 0:
        raise TooFewRows("no LSA or HSA rows to classify")
    subset = matrix.take(rows)
    return _labeled(subset, subset.sa_groups == SAGroup.HSA.value)


def utterance_dataset(matrix: FeatureMatrix) -> LabeledSet:
    """refusal = 1, consent = 0; rows of unknown type are dropped."""
    kinds = matrix.utterance_types
    for kind in UTTERANCE_TYPES:
        if not np.any(kinds == kind):
            raise MissingUtteranceLabels(f"no {kind} utterances in the feature matrix")
    rows = np.flatnonzero(np.isin(kinds, UTTERANCE_TYPES))
    if rows.size < len(matrix):
        log.warning("dropping %d utterance(s) of unknown type", len(matrix) - rows.size)
    subset = matrix.take(rows)
    return _labeled(subset, subset.utterance_types == UtteranceType.REFUSAL.value)


# ── Feature-count sweep ───────────────────────────────────────────────────────
@dataclass(frozen=True)
class SweepPoint:
    k: int
    mean_accuracy: float
    std_accuracy: float


@dataclass(frozen=True)
class SweepResult:
    model: str
    points: Tuple[SweepPoint, ...]
    ranking: FeatureRanking  # on the whole normalized data set
    rank_scope: str

    @property
    def best(self) -> SweepPoint:
        return max(self.points, key=lambda p: (p.mean_accuracy, -p.k))

    def to_rows(self):
        return [[p.k, p.mean_accuracy, p.std_accuracy] for p in self.points]

    def to_dict(self):
        return {"model": self.model, "rank_scope": self.rank_scope,
                "ranking": self.ranking.to_records(), "sweep": self.to_rows()}


def sweep_feature_count(data: LabeledSet, spec: ModelSpec, plan: FoldPlan,
                        options: CVOptions = CVOptions()) -> SweepResult:
    ranking = rank_arrays(normalized_all(data, options.outlier_k), data.labels, data.columns)
    points = []
    for k in range(1, data.n_features + 1):
        result = cross_validate(data, spec, plan, options, top_k=k)
        points.append(SweepPoint(k, result.mean["accuracy"], result.std["accuracy"]))
        log.debug("sweep %s k=%d: %.3f", spec.name, k, result.mean["accuracy"])
    return SweepResult(spec.name, tuple(points), ranking, options.rank_scope)


def _gender_subsets(data: LabeledSet) -> Dict[str, LabeledSet]:
    if data.genders is None:
        raise TooFewGroups("gender configurations need per-row genders")
    present = sorted(set(data.genders.tolist()))
    if len(present) < 2:
        raise TooFewGroups(f"need rows of both genders, found {present}")
    return {g: data.take(np.flatnonzero(data.genders == g)) for g in present}


def gender_sweeps(data: LabeledSet, spec: ModelSpec, settings: FoldSettings,
                  options: CVOptions = CVOptions()) -> Dict[str, SweepResult]:
    return {
        gender: sweep_feature_count(subset, spec, settings.plan(subset), options)
        for gender, subset in _gender_subsets(data).items()
    }


# ── Gender configurations ─────────────────────────────────────────────────────
@dataclass(frozen=True)
class TransferMatrix:
    """accuracy[i][j]: trained on genders[i], tested on genders[j]."""

    genders: Tuple[str, ...]
    accuracy: Tuple[Tuple[float, ...], ...]

    def get(self, train: str, test: str) -> float:
        return self.accuracy[self.genders.index(train)][self.genders.index(test)]

    def to_rows(self):
        return [[a, b, self.get(a, b)] for a in self.genders for b in self.genders]

    def to_dict(self):
        return {"genders": list(self.genders), "accuracy": [list(r) for r in self.accuracy]}


@dataclass(frozen=True)
class GenderConfigurations:
    unified: CVResult
    per_gender: Dict[str, CVResult]
    transfer: TransferMatrix

    def to_dict(self):
        return {
            "unified": self.unified.to_dict(),
            "per_gender": {g: r.to_dict() for g, r in sorted(self.per_gender.items())},
            "transfer": self.transfer.to_dict(),
        }


def _own_normalized(data: LabeledSet, outlier_k: float) -> np.ndarray:
    bounds, stats = fit_preparation(data.vectors, data.genders, data.columns, outlier_k)
    return prepare(data.vectors, data.genders, bounds, stats)


def transfer_accuracy(source: LabeledSet, target: LabeledSet, spec: ModelSpec,
                      outlier_k: float = 3.0) -> float:
    """Train on all of `source`, test on all of `target`; each side normalized
    with statistics fitted on itself."""
    model = spec.fit(source.with_vectors(_own_normalized(source, outlier_k)))
    predicted = model.predict(_own_normalized(target, outlier_k))
    return compute_metrics(predicted, target.labels).accuracy


def gender_configurations(data: LabeledSet, spec: ModelSpec, settings: FoldSettings,
                          options: CVOptions = CVOptions()) -> GenderConfigurations:
    subsets = _gender_subsets(data)
    plans = {g: settings.plan(s) for g, s in subsets.items()}
    unified = cross_validate(data, spec, settings.plan(data), options)
    per_gender = {g: cross_validate(s, spec, plans[g], options) for g, s in subsets.items()}

    genders = tuple(subsets)
    rows = []
    for a in genders:
        row = []
        for b in genders:
            if a == b:
                row.append(per_gender[a].mean["accuracy"])
                continue
            try:
                row.append(transfer_accuracy(subsets[a], subsets[b], spec, options.outlier_k))
            except InputError:
                raise
            except Exception as e:
                raise FoldError(spec.name, f"{a}->{b}", e) from e
        rows.append(tuple(row))
    transfer = TransferMatrix(genders, tuple(rows))
    log.info("%s transfer: %s", spec.name, transfer.to_rows())
    return GenderConfigurations(unified, per_gender, transfer)


# ── Utterance types ───────────────────────────────────────────────────────────
def split_by_utterance_eval(matrix: FeatureMatrix, spec: ModelSpec, settings: FoldSettings,
                            options: CVOptions = CVOptions()) -> Dict[str, CVResult]:
    """SA cross-validation run separately on the refusal and the consent rows."""
    kinds = matrix.utterance_types
    results = {}
    for kind in UTTERANCE_TYPES:
        rows = np.flatnonzero(kinds == kind)
        if rows.size == 0:
            raise MissingUtteranceLabels(f"no {kind} utterances in the feature matrix")
        subset = sa_dataset(matrix.take(rows))
        results[kind] = cross_validate(subset, spec, settings.plan(subset), options)
    return results


def utterance_type_classification(matrix: FeatureMatrix, spec: ModelSpec, settings: FoldSettings,
                                  options: CVOptions = CVOptions()) -> CVResult:
    """Same pipeline with refusal as the positive class."""
    data = utterance_dataset(matrix)
    return cross_validate(data, spec, settings.plan(data), options)
