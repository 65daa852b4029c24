"""k-nearest-neighbour classifier on Euclidean distance."""
from typing import Tuple

import numpy as np

from ..errors import EmptyTrainingSet, OutOfRange
from .data import LabeledSet
from .model import TrainedModel


def nearest(vectors, query, k: int) -> np.ndarray:
    """Indices of the k nearest rows; equal distances keep the lower index."""
    distances = ((np.asarray(vectors) - np.asarray(query, dtype=np.float64)) ** 2).sum(axis=1)
    return np.argsort(distances, kind="stable")[:k]


def knn_predict(train: LabeledSet, query, k: int = 3) -> Tuple[int, float]:
    """(label, positive-neighbour fraction) for one query vector."""
    if train is None or len(train) == 0:
        raise EmptyTrainingSet("kNN needs training rows")
    if not 1 <= k <= len(train):
        raise OutOfRange(f"k = {k} outside [1, {len(train)}]")
    score = float(train.labels[nearest(train.vectors, query, k)].mean())
    return int(score >= 0.5), score


def train_knn(data: LabeledSet, k: int = 3) -> TrainedModel:
    if not 1 <= k <= len(data):
        raise OutOfRange(f"k = {k} outside [1, {len(data)}]")
    return TrainedModel("knn", {"vectors": data.vectors, "labels": data.labels, "k": int(k)}, data.columns)


def predict_proba(params, vectors) -> np.ndarray:
    train = params["vectors"]
    labels = params["labels"]
    k = params["k"]
    return np.array([labels[nearest(train, row, k)].mean() for row in vectors], dtype=np.float64)
