"""
GP Module - voxmark
-------------------
Binary Gaussian-process classifier: RBF kernel, logistic likelihood, Laplace
approximation of the latent posterior found by damped Newton iterations.
"""
import logging
import math
from dataclasses import dataclass
from typing import List

import numpy as np
from scipy.linalg import LinAlgError, cho_solve, cholesky, solve_triangular
from scipy.special import expit, log_expit

from ..errors import NonConvergence, SingularKernel, TooManyRows
from .data import LabeledSet
from .model import TrainedModel

log = logging.getLogger(__name__)

KERNEL_JITTER = 1e-8
OBJECTIVE_TOL = 1e-8
MAX_NEWTON = 100
MAX_HALVINGS = 30


def rbf_kernel(a, b, length_scale: float = 1.0, variance: float = 1.0) -> np.ndarray:
    a = np.atleast_2d(a) / length_scale
    b = np.atleast_2d(b) / length_scale
    sq = (a * a).sum(1)[:, None] + (b * b).sum(1)[None, :] - 2.0 * a @ b.T
    return variance * np.exp(-0.5 * np.maximum(sq, 0.0))


@dataclass(frozen=True)
class LaplaceMode:
    f: np.ndarray
    a: np.ndarray
    objective_trace: List[float]
    iterations: int


def _objective(a, f, signs) -> float:
    """Unnormalized log posterior -a'f/2 + sum log sigma(y f)."""
    return float(-0.5 * (a @ f) + log_expit(signs * f).sum())


def _chol_b(kernel, sqrt_w):
    n = kernel.shape[0]
    b = np.eye(n) + sqrt_w[:, None] * kernel * sqrt_w[None, :]
    try:
        return cholesky(b, lower=True)
    except LinAlgError as e:
        raise SingularKernel(f"Cholesky factorization failed: {e}") from e


def laplace_mode(kernel, labels) -> LaplaceMode:
    """Newton search for the posterior mode; every step is halved until the
    objective does not decrease, so the trace is monotone."""
    targets = np.asarray(labels, dtype=np.float64)
    signs = 2.0 * targets - 1.0
    a = np.zeros(targets.size)
    f = np.zeros(targets.size)
    trace = [_objective(a, f, signs)]
    for iteration in range(1, MAX_NEWTON + 1):
        pi = expit(f)
        w = pi * (1.0 - pi)
        sqrt_w = np.sqrt(w)
        lower = _chol_b(kernel, sqrt_w)
        b = w * f + (targets - pi)
        inner = cho_solve((lower, True), sqrt_w * (kernel @ b))
        a_newton = b - sqrt_w * inner

        step = a_newton - a
        scale = 1.0
        for _ in range(MAX_HALVINGS):
            a_try = a + scale * step
            f_try = kernel @ a_try
            value = _objective(a_try, f_try, signs)
            if value >= trace[-1]:
                break
            scale *= 0.5
        else:
            a_try, f_try, value = a, f, trace[-1]
        a, f = a_try, f_try
        trace.append(value)
        if abs(trace[-1] - trace[-2]) < OBJECTIVE_TOL:
            return LaplaceMode(f, a, trace, iteration)
    raise NonConvergence(
        f"Laplace iterations did not converge in {MAX_NEWTON} steps",
        iterations=MAX_NEWTON, residual=abs(trace[-1] - trace[-2]))


def train_gp_classifier(data: LabeledSet, length_scale: float = 1.0, variance: float = 1.0,
                        max_rows: int = 5000) -> TrainedModel:
    if len(data) > max_rows:
        raise TooManyRows(f"GP classifier is capped at {max_rows} rows, got {len(data)}")
    x = data.vectors
    kernel = rbf_kernel(x, x, length_scale, variance) + KERNEL_JITTER * np.eye(len(data))
    mode = laplace_mode(kernel, data.labels)
    pi = expit(mode.f)
    sqrt_w = np.sqrt(pi * (1.0 - pi))
    lower = _chol_b(kernel, sqrt_w)
    log.debug("gp: mode after %d Newton steps, objective %.6g", mode.iterations, mode.objective_trace[-1])
    return TrainedModel("gp", {
        "inputs": x,
        "gradient": data.labels - pi,
        "sqrt_w": sqrt_w,
        "chol": lower,
        "length_scale": float(length_scale),
        "variance": float(variance),
        "objective_trace": [float(v) for v in mode.objective_trace],
    }, data.columns)


def predict_latent(params, vectors):
    """Predictive mean and variance of the latent function."""
    k_star = rbf_kernel(params["inputs"], vectors, params["length_scale"], params["variance"])
    mean = k_star.T @ params["gradient"]
    v = solve_triangular(params["chol"], params["sqrt_w"][:, None] * k_star, lower=True)
    var = np.maximum(params["variance"] - (v * v).sum(axis=0), 0.0)
    return mean, var


def predict_proba(params, vectors) -> np.ndarray:
    mean, var = predict_latent(params, vectors)
    return expit(mean / np.sqrt(1.0 + math.pi * var / 8.0))
