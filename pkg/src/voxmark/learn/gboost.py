"""
GBoost Module - voxmark
-----------------------
Gradient boosting for log loss: each round fits a shallow squared-error
regression tree to y - p and takes a damped Newton step in every leaf.
"""
import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.special import expit

from .data import LabeledSet
from .model import TrainedModel

log = logging.getLogger(__name__)

BASE_RATE_CLIP = 1e-6
MAX_HALVINGS = 30
TIE_TOL = 1e-12


@dataclass(frozen=True)
class RegressionNode:
    value: float = 0.0
    feature: Optional[int] = None
    threshold: Optional[float] = None
    left: Optional["RegressionNode"] = None
    right: Optional["RegressionNode"] = None

    @property
    def is_leaf(self) -> bool:
        return self.feature is None

    def evaluate(self, vectors) -> np.ndarray:
        if self.is_leaf:
            return np.full(vectors.shape[0], self.value)
        mask = vectors[:, self.feature] <= self.threshold
        out = np.empty(vectors.shape[0])
        out[mask] = self.left.evaluate(vectors[mask])
        out[~mask] = self.right.evaluate(vectors[~mask])
        return out

    def to_dict(self) -> dict:
        if self.is_leaf:
            return {"value": self.value}
        return {"feature": self.feature, "threshold": self.threshold,
                "left": self.left.to_dict(), "right": self.right.to_dict()}

    @classmethod
    def from_dict(cls, doc) -> "RegressionNode":
        if "feature" not in doc:
            return cls(float(doc["value"]))
        return cls(0.0, int(doc["feature"]), float(doc["threshold"]),
                   cls.from_dict(doc["left"]), cls.from_dict(doc["right"]))


def log_loss(labels, scores) -> np.ndarray:
    """Per-row logistic loss of raw scores."""
    return np.logaddexp(0.0, scores) - labels * scores


def _regression_split(x, r):
    """Best squared-error split (zero-gain splits allowed): (feature, threshold) or None."""
    n = r.size
    total = r.sum()
    n_left = np.arange(1, n, dtype=np.float64)
    best = None
    for j in range(x.shape[1]):
        order = np.argsort(x[:, j], kind="stable")
        values = x[order, j]
        valid = values[:-1] != values[1:]
        if not valid.any():
            continue
        s_left = np.cumsum(r[order])[:-1]
        gain = s_left ** 2 / n_left + (total - s_left) ** 2 / (n - n_left) - total ** 2 / n
        gain = np.where(valid, gain, -np.inf)
        i = int(np.flatnonzero(gain >= gain.max() - TIE_TOL)[0])
        if best is None or gain[i] > best[2] + TIE_TOL:
            best = (j, float((values[i] + values[i + 1]) / 2.0), float(gain[i]))
    return None if best is None else best[:2]


def _grow(x, y, scores, depth, learning_rate) -> RegressionNode:
    p = expit(scores)
    split = _regression_split(x, y - p) if depth > 0 and y.size > 1 else None
    if split is None:
        return RegressionNode(_leaf_step(y, scores, p, learning_rate))
    feature, threshold = split
    mask = x[:, feature] <= threshold
    return RegressionNode(
        0.0, feature, threshold,
        _grow(x[mask], y[mask], scores[mask], depth - 1, learning_rate),
        _grow(x[~mask], y[~mask], scores[~mask], depth - 1, learning_rate),
    )


def _leaf_step(y, scores, p, learning_rate) -> float:
    """Damped Newton step, halved until the leaf's loss does not increase."""
    hessian = float((p * (1.0 - p)).sum())
    if hessian <= 0.0:
        return 0.0
    step = learning_rate * float((y - p).sum()) / hessian
    before = log_loss(y, scores).sum()
    for _ in range(MAX_HALVINGS):
        if log_loss(y, scores + step).sum() <= before:
            return step
        step *= 0.5
    return 0.0


def train_gboost(data: LabeledSet, rounds: int = 100, depth: int = 2,
                 learning_rate: float = 0.1) -> TrainedModel:
    x = data.vectors
    y = data.labels.astype(np.float64)
    rate = float(np.clip(y.mean(), BASE_RATE_CLIP, 1.0 - BASE_RATE_CLIP))
    base = float(np.log(rate / (1.0 - rate)))
    scores = np.full(y.size, base)
    trees = []
    for _ in range(rounds):
        tree = _grow(x, y, scores, depth, learning_rate)
        scores = scores + tree.evaluate(x)
        trees.append(tree)
    log.debug("gboost: %d rounds, training loss %.6g", rounds, float(log_loss(y, scores).mean()))
    return TrainedModel("gboost", {"base": base, "trees": trees}, data.columns)


def decision_scores(params, vectors) -> np.ndarray:
    scores = np.full(vectors.shape[0], params["base"])
    for tree in params["trees"]:
        scores = scores + tree.evaluate(vectors)
    return scores


def predict_proba(params, vectors) -> np.ndarray:
    return expit(decision_scores(params, vectors))
