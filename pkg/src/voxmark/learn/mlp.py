"""
MLP Module - voxmark
--------------------
One tanh hidden layer and a logistic output, trained by full-batch gradient
descent on the mean log loss. Hidden weights start uniform in +/- 1/sqrt(d),
the output layer at zero.
"""
import logging
from typing import Dict, Tuple

import numpy as np
from scipy.special import expit

from .data import LabeledSet
from .model import TrainedModel

log = logging.getLogger(__name__)


def init_weights(n_features: int, hidden: int, seed: int) -> Dict[str, np.ndarray]:
    rng = np.random.default_rng(seed)
    bound = 1.0 / np.sqrt(n_features)
    return {
        "w1": rng.uniform(-bound, bound, size=(hidden, n_features)),
        "b1": np.zeros(hidden),
        "w2": np.zeros(hidden),
        "b2": np.zeros(1),
    }


def pack(weights) -> np.ndarray:
    return np.concatenate([weights["w1"].ravel(), weights["b1"], weights["w2"], weights["b2"]])


def unpack(theta, n_features: int, hidden: int) -> Dict[str, np.ndarray]:
    cut = np.cumsum([hidden * n_features, hidden, hidden])
    return {
        "w1": theta[:cut[0]].reshape(hidden, n_features),
        "b1": theta[cut[0]:cut[1]],
        "w2": theta[cut[1]:cut[2]],
        "b2": theta[cut[2]:],
    }


def _forward(weights, vectors):
    hidden = np.tanh(vectors @ weights["w1"].T + weights["b1"])
    return hidden, hidden @ weights["w2"] + weights["b2"][0]


def mlp_objective(theta, vectors, labels, hidden: int) -> Tuple[float, np.ndarray]:
    """Mean log loss and its gradient with respect to the packed weights."""
    weights = unpack(theta, vectors.shape[1], hidden)
    h, z = _forward(weights, vectors)
    loss = float(np.mean(np.logaddexp(0.0, z) - labels * z))
    dz = (expit(z) - labels) / labels.size
    dh = np.outer(dz, weights["w2"]) * (1.0 - h * h)
    grads = {
        "w1": dh.T @ vectors,
        "b1": dh.sum(axis=0),
        "w2": h.T @ dz,
        "b2": np.array([dz.sum()]),
    }
    return loss, pack(grads)


def train_mlp(data: LabeledSet, hidden: int = 16, epochs: int = 500, seed: int = 0,
              learning_rate: float = 0.5) -> TrainedModel:
    x = data.vectors
    y = data.labels.astype(np.float64)
    theta = pack(init_weights(x.shape[1], hidden, seed))
    loss = float("nan")
    for _ in range(epochs):
        loss, grad = mlp_objective(theta, x, y, hidden)
        theta = theta - learning_rate * grad
    log.debug("mlp: %d epochs, last loss %.6g", epochs, loss)
    params = unpack(theta, x.shape[1], hidden)
    params["hidden"] = int(hidden)
    return TrainedModel("mlp", params, data.columns)


def predict_proba(params, vectors) -> np.ndarray:
    return expit(_forward(params, vectors)[1])
