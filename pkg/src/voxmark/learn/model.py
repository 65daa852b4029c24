"""
Model Module - voxmark
----------------------
TrainedModel and its versioned JSON document.
"""
import json
import logging
import os
from dataclasses import dataclass, field, replace
from typing import Any, Mapping, Optional, Tuple

import numpy as np

from ..errors import ConfigError
from ..features.norm import NormStats

log = logging.getLogger(__name__)

MODEL_SCHEMA = 1
VARIANTS = ("tree", "knn", "logistic", "gp", "gboost", "mlp")


@dataclass(frozen=True)
class TrainedModel:
    variant: str
    params: Mapping[str, Any]
    columns: Tuple[str, ...] = ()
    norm_stats: Optional[NormStats] = None
    gender_model: Optional[Any] = field(default=None, compare=False)

    def __post_init__(self):
        if self.variant not in VARIANTS:
            raise ValueError(f"unknown model variant {self.variant!r}")
        params = {}
        for key, value in dict(self.params).items():
            if isinstance(value, np.ndarray):
                value = value.copy()
                value.setflags(write=False)
            params[key] = value
        object.__setattr__(self, "params", params)
        object.__setattr__(self, "columns", tuple(self.columns))

    def predict_proba(self, vectors) -> np.ndarray:
        from .registry import predictor

        vectors = np.atleast_2d(np.asarray(vectors, dtype=np.float64))
        proba = predictor(self.variant)(self.params, vectors)
        return np.clip(proba, 0.0, 1.0)

    def predict(self, vectors) -> np.ndarray:
        """Hard labels: positive iff probability >= 0.5."""
        return (self.predict_proba(vectors) >= 0.5).astype(np.int64)

    def with_context(self, columns=None, norm_stats=None, gender_model=None) -> "TrainedModel":
        return replace(
            self,
            columns=self.columns if columns is None else tuple(columns),
            norm_stats=self.norm_stats if norm_stats is None else norm_stats,
            gender_model=self.gender_model if gender_model is None else gender_model,
        )


# ── JSON document ─────────────────────────────────────────────────────────────
def _encode(value):
    from .gboost import RegressionNode
    from .tree import TreeNode

    if isinstance(value, np.ndarray):
        return {"ndarray": value.tolist(), "dtype": str(value.dtype)}
    if isinstance(value, TreeNode):
        return {"tree": value.to_dict()}
    if isinstance(value, RegressionNode):
        return {"regression_tree": value.to_dict()}
    if isinstance(value, (list, tuple)):
        return [_encode(v) for v in value]
    if isinstance(value, dict):
        return {"dict": {k: _encode(v) for k, v in value.items()}}
    if isinstance(value, np.generic):
        return value.item()
    return value


def _decode(value):
    from .gboost import RegressionNode
    from .tree import TreeNode

    if isinstance(value, list):
        return [_decode(v) for v in value]
    if isinstance(value, dict):
        if "ndarray" in value:
            return np.asarray(value["ndarray"], dtype=value["dtype"])
        if "tree" in value:
            return TreeNode.from_dict(value["tree"])
        if "regression_tree" in value:
            return RegressionNode.from_dict(value["regression_tree"])
        if "dict" in value:
            return {k: _decode(v) for k, v in value["dict"].items()}
    return value


def model_to_dict(model: TrainedModel) -> dict:
    return {
        "schema": MODEL_SCHEMA,
        "variant": model.variant,
        "columns": list(model.columns),
        "params": {k: _encode(v) for k, v in model.params.items()},
        "norm_stats": None if model.norm_stats is None else model.norm_stats.to_dict(),
        "gender_model": None if model.gender_model is None else model.gender_model.to_dict(),
    }


def model_from_dict(doc: Mapping[str, Any]) -> TrainedModel:
    from .gender import GenderClassifier

    if doc.get("schema") != MODEL_SCHEMA:
        raise ConfigError(f"unsupported model schema {doc.get('schema')!r}")
    try:
        return TrainedModel(
            variant=doc["variant"],
            params={k: _decode(v) for k, v in doc["params"].items()},
            columns=tuple(doc["columns"]),
            norm_stats=None if doc.get("norm_stats") is None else NormStats.from_dict(doc["norm_stats"]),
            gender_model=None if doc.get("gender_model") is None
            else GenderClassifier.from_dict(doc["gender_model"]),
        )
    except (KeyError, TypeError, ValueError) as e:
        raise ConfigError(f"malformed model document: {e}") from e


def save_model(path, model: TrainedModel) -> None:
    from ..reporter import write_json_atomic

    write_json_atomic(path, model_to_dict(model))
    log.info("saved %s model to %s", model.variant, path)


def load_model(path) -> TrainedModel:
    path = os.fspath(path)
    try:
        with open(path, encoding="utf-8") as f:
            doc = json.load(f)
    except FileNotFoundError as e:
        raise ConfigError(f"model file not found: {path}") from e
    except json.JSONDecodeError as e:
        raise ConfigError(f"{path}: {e}") from e
    return model_from_dict(doc)
