"""
Gender Module - voxmark
-----------------------
Gender pre-classifier on raw acoustic features, used to pick the gender's
normalization statistics for recordings without a gender label.
"""
from dataclasses import dataclass
from typing import Tuple

import numpy as np
from scipy.special import expit

from ..corpus.types import Gender
from ..errors import SingleClass, UntrainedModel
from ..features.matrix import FeatureMatrix
from .logistic import fit_logistic_weights

POSITIVE = Gender.FEMALE


@dataclass(frozen=True)
class GenderClassifier:
    """Logistic regression on raw features standardized with pooled statistics."""

    columns: Tuple[str, ...]
    mean: np.ndarray
    scale: np.ndarray
    weights: np.ndarray
    bias: float

    def proba_female(self, raw_vectors) -> np.ndarray:
        raw = np.atleast_2d(np.asarray(raw_vectors, dtype=np.float64))
        return expit(((raw - self.mean) / self.scale) @ self.weights + self.bias)

    def predict(self, raw_vectors) -> np.ndarray:
        p = self.proba_female(raw_vectors)
        return np.where(p >= 0.5, Gender.FEMALE.value, Gender.MALE.value)

    def to_dict(self) -> dict:
        return {"columns": list(self.columns), "mean": self.mean.tolist(), "scale": self.scale.tolist(),
                "weights": self.weights.tolist(), "bias": self.bias}

    @classmethod
    def from_dict(cls, doc) -> "GenderClassifier":
        return cls(tuple(doc["columns"]), np.asarray(doc["mean"], dtype=np.float64),
                   np.asarray(doc["scale"], dtype=np.float64),
                   np.asarray(doc["weights"], dtype=np.float64), float(doc["bias"]))


def train_gender_classifier(matrix: FeatureMatrix, l2: float = 1e-2) -> GenderClassifier:
    genders = matrix.genders
    labels = (genders == POSITIVE.value).astype(np.float64)
    if labels.min() == labels.max():
        raise SingleClass("gender classifier needs both genders in the training rows")
    raw = matrix.values
    mean = raw.mean(axis=0)
    scale = raw.std(axis=0, ddof=1) if len(matrix) > 1 else np.ones(raw.shape[1])
    scale = np.where(scale > 0, scale, 1.0)
    weights, bias = fit_logistic_weights((raw - mean) / scale, labels, l2)
    return GenderClassifier(tuple(matrix.columns), mean, scale, weights, bias)


def classify_gender(raw_vector, classifier: GenderClassifier = None) -> Tuple[Gender, float]:
    """(gender, probability of that gender) for one raw feature vector."""
    if classifier is None:
        raise UntrainedModel("no gender classifier has been trained")
    if hasattr(raw_vector, "as_array"):
        raw_vector = raw_vector.as_array()
    p = float(classifier.proba_female(raw_vector)[0])
    return (Gender.FEMALE, p) if p >= 0.5 else (Gender.MALE, 1.0 - p)

