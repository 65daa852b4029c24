from .data import LabeledSet
from .gboost import RegressionNode, train_gboost
from .gender import GenderClassifier, classify_gender, train_gender_classifier
from .gp import laplace_mode, rbf_kernel, train_gp_classifier
from .knn import knn_predict, nearest, train_knn
from .logistic import logistic_objective, train_logistic
from .mlp import mlp_objective, train_mlp
from .model import TrainedModel, load_model, model_from_dict, model_to_dict, save_model
from .registry import TRAINERS, fit_model
from .render import render_tree
from .tree import TreeNode, entropy_bits, train_decision_tree

__all__ = [
    "GenderClassifier",
    "LabeledSet",
    "RegressionNode",
    "TRAINERS",
    "TrainedModel",
    "TreeNode",
    "classify_gender",
    "entropy_bits",
    "fit_model",
    "knn_predict",
    "laplace_mode",
    "load_model",
    "logistic_objective",
    "mlp_objective",
    "model_from_dict",
    "model_to_dict",
    "nearest",
    "rbf_kernel",
    "render_tree",
    "save_model",
    "train_decision_tree",
    "train_gboost",
    "train_gender_classifier",
    "train_gp_classifier",
    "train_knn",
    "train_logistic",
    "train_mlp",
]
