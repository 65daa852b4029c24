"""Classifier lookup by name: trainers and their probability functions."""
from typing import Any, Callable, Dict, Mapping, Optional

from ..errors import ConfigError
from . import gboost, gp, knn, logistic, mlp, tree
from .data import LabeledSet
from .model import TrainedModel

TRAINERS: Dict[str, Callable[..., TrainedModel]] = {
    "tree": tree.train_decision_tree,
    "knn": knn.train_knn,
    "logistic": logistic.train_logistic,
    "gp": gp.train_gp_classifier,
    "gboost": gboost.train_gboost,
    "mlp": mlp.train_mlp,
}

_PREDICTORS = {
    "tree": tree.predict_proba,
    "knn": knn.predict_proba,
    "logistic": logistic.predict_proba,
    "gp": gp.predict_proba,
    "gboost": gboost.predict_proba,
    "mlp": mlp.predict_proba,
}


def predictor(variant: str):
    try:
        return _PREDICTORS[variant]
    except KeyError:
        raise ConfigError(f"unknown classifier: {variant}") from None


def fit_model(name: str, data: LabeledSet, params: Optional[Mapping[str, Any]] = None) -> TrainedModel:
    """Train classifier `name` with keyword parameters from `params`."""
    try:
        trainer = TRAINERS[name]
    except KeyError:
        raise ConfigError(f"unknown classifier: {name}") from None
    return trainer(data, **dict(params or {}))
