"""
Metrics Module - voxmark
------------------------
Confusion-matrix metrics and ROC curves (positive class = label 1).
"""
from dataclasses import asdict, dataclass
from typing import Optional, Tuple

import numpy as np
from scipy.integrate import trapezoid
from scipy.stats import rankdata

from ..errors import LengthMismatch, SingleClass, TooFewSamples


@dataclass(frozen=True)
class Metrics:
    """Precision is None without positive predictions; recall is None without positives."""

    accuracy: float
    precision: Optional[float]
    recall: Optional[float]
    tp: int
    fp: int
    fn: int
    tn: int

    @property
    def n(self) -> int:
        return self.tp + self.fp + self.fn + self.tn

    def to_dict(self):
        return asdict(self)


@dataclass(frozen=True)
class RocCurve:
    points: Tuple[Tuple[float, float], ...]  # (fpr, tpr) from (0, 0) to (1, 1)
    auc: float

    def to_dict(self):
        return {"points": [list(p) for p in self.points], "auc": self.auc}


def confusion(predicted, actual) -> Tuple[int, int, int, int]:
    predicted = np.asarray(predicted).astype(bool)
    actual = np.asarray(actual).astype(bool)
    tp = int((predicted & actual).sum())
    fp = int((predicted & ~actual).sum())
    fn = int((~predicted & actual).sum())
    tn = int((~predicted & ~actual).sum())
    return tp, fp, fn, tn


def metrics_from_counts(tp: int, fp: int, fn: int, tn: int) -> Metrics:
    n = tp + fp + fn + tn
    return Metrics(
        accuracy=(tp + tn) / n,
        precision=tp / (tp + fp) if tp + fp else None,
        recall=tp / (tp + fn) if tp + fn else None,
        tp=tp, fp=fp, fn=fn, tn=tn,
    )


def compute_metrics(predicted, actual) -> Metrics:
    predicted = np.asarray(predicted)
    actual = np.asarray(actual)
    if predicted.shape != actual.shape:
        raise LengthMismatch(f"{predicted.size} predictions for {actual.size} labels")
    if actual.size == 0:
        raise TooFewSamples("metrics need at least one prediction")
    return metrics_from_counts(*confusion(predicted, actual))


def roc_auc(scores, actual) -> RocCurve:
    """Thresholds sweep the distinct scores from high to low; tied scores move
    along a diagonal segment. AUC by the trapezoid rule."""
    scores = np.asarray(scores, dtype=np.float64)
    actual = np.asarray(actual).astype(bool)
    if scores.shape != actual.shape:
        raise LengthMismatch(f"{scores.size} scores for {actual.size} labels")
    n_pos = int(actual.sum())
    n_neg = actual.size - n_pos
    if n_pos == 0 or n_neg == 0:
        raise SingleClass("ROC needs both classes")

    order = np.argsort(-scores, kind="stable")
    ranked = scores[order]
    hits = actual[order]
    last_of_run = np.append(ranked[1:] != ranked[:-1], True)
    tpr = np.concatenate([[0.0], np.cumsum(hits)[last_of_run] / n_pos])
    fpr = np.concatenate([[0.0], np.cumsum(~hits)[last_of_run] / n_neg])
    auc = float(trapezoid(tpr, fpr))
    return RocCurve(tuple(zip(fpr.tolist(), tpr.tolist())), auc)


def rank_auc(scores, actual) -> float:
    """Concordant-pair AUC with half credit for ties (Mann-Whitney form)."""
    scores = np.asarray(scores, dtype=np.float64)
    actual = np.asarray(actual).astype(bool)
    n_pos = int(actual.sum())
    n_neg = actual.size - n_pos
    if n_pos == 0 or n_neg == 0:
        raise SingleClass("AUC needs both classes")
    ranks = rankdata(scores)
    return float((ranks[actual].sum() - n_pos * (n_pos + 1) / 2.0) / (n_pos * n_neg))
