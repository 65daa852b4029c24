"""
Logistic Module - voxmark
-------------------------
L2-regularized logistic regression fitted by full-batch gradient descent with
Armijo backtracking. The bias is not penalized.
"""
import logging
from typing import Tuple

import numpy as np
from scipy.special import expit

from .data import LabeledSet
from .model import TrainedModel

log = logging.getLogger(__name__)

GRAD_TOL = 1e-6
MAX_ITER = 10000
ARMIJO = 1e-4


def logistic_objective(theta, vectors, labels, l2: float) -> Tuple[float, np.ndarray]:
    """Mean log loss + l2/2 * |w|^2 and its gradient; theta = (w..., bias)."""
    w, b = theta[:-1], theta[-1]
    z = vectors @ w + b
    loss = float(np.mean(np.logaddexp(0.0, z) - labels * z) + 0.5 * l2 * (w @ w))
    residual = (expit(z) - labels) / labels.size
    grad = np.append(vectors.T @ residual + l2 * w, residual.sum())
    return loss, grad


def minimize_gd(objective, theta, grad_tol=GRAD_TOL, max_iter=MAX_ITER):
    """Gradient descent with backtracking; returns (theta, loss, iterations)."""
    loss, grad = objective(theta)
    step = 1.0
    iteration = 0
    for iteration in range(1, max_iter + 1):
        if np.max(np.abs(grad)) < grad_tol:
            break
        sq = float(grad @ grad)
        while True:
            candidate = theta - step * grad
            new_loss, new_grad = objective(candidate)
            if new_loss <= loss - ARMIJO * step * sq or step < 1e-12:
                break
            step *= 0.5
        theta, loss, grad = candidate, new_loss, new_grad
        step = min(step * 2.0, 1e6)
    return theta, loss, iteration


def fit_logistic_weights(vectors, labels, l2: float) -> Tuple[np.ndarray, float]:
    vectors = np.asarray(vectors, dtype=np.float64)
    labels = np.asarray(labels, dtype=np.float64)
    theta0 = np.zeros(vectors.shape[1] + 1)
    theta, loss, iterations = minimize_gd(lambda t: logistic_objective(t, vectors, labels, l2), theta0)
    log.debug("logistic: loss %.6g after %d iterations", loss, iterations)
    return theta[:-1], float(theta[-1])


def train_logistic(data: LabeledSet, l2: float = 1e-4) -> TrainedModel:
    weights, bias = fit_logistic_weights(data.vectors, data.labels, l2)
    return TrainedModel("logistic", {"weights": weights, "bias": bias, "l2": float(l2)}, data.columns)


def predict_proba(params, vectors) -> np.ndarray:
    return expit(vectors @ params["weights"] + params["bias"])
