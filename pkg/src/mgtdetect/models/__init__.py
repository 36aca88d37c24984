"""Classifier families over named feature matrices."""

from __future__ import annotations

import numpy as np

from .base import (IMPORTANCE_KINDS, KINDS, PROBA_KINDS, FeatureMatrix, FingerprintMismatch, ImportanceRanking,
                   ModelCompatError, ModelError, TrainConfig, TrainedModel)
from .forest import ForestModel, train_forest
from .linear import LinearModel, train_logreg, train_sgd, train_svm
from .mlp import MLPModel, train_mlp
from .naive_bayes import NaiveBayesModel, train_mnb
from .persist import load_model, model_from_dict, model_to_dict, save_model
from .tree import TreeModel, train_tree
from .voting import VotingModel, VotingTie

_TRAINERS = {
    "logreg": train_logreg,
    "sgd_linear": train_sgd,
    "svm_linear": train_svm,
    "mnb": train_mnb,
    "tree": train_tree,
    "forest": train_forest,
    "mlp": train_mlp,
}


def train(kind: str, X: FeatureMatrix, config: TrainConfig = TrainConfig(),
          members: dict[str, TrainedModel] | None = None) -> TrainedModel:
    """Train one model. For ``voting``, already-trained members are reused when supplied."""
    if kind == "voting":
        members = members or {}
        trained = tuple(members[k] if k in members else _TRAINERS[k](X, config) for k in config.voting_members)
        return VotingModel("voting", X.names, config.seed, trained, config.tie_to_positive)
    if kind not in _TRAINERS:
        raise ModelError(f"unknown model kind {kind!r}; expected one of {', '.join(KINDS)}")
    return _TRAINERS[kind](X, config)


def predict(model: TrainedModel, X: FeatureMatrix) -> np.ndarray:
    return model.predict(X)


def predict_proba(model: TrainedModel, X: FeatureMatrix) -> np.ndarray:
    return model.predict_proba(X)


def feature_importance(model: TrainedModel) -> ImportanceRanking:
    if model.kind not in IMPORTANCE_KINDS:
        raise ModelError(f"{model.kind} does not define feature importances")
    return ImportanceRanking.from_values(model.feature_names, model.importances())


__all__ = [
    "KINDS", "PROBA_KINDS", "IMPORTANCE_KINDS", "FeatureMatrix", "TrainConfig", "TrainedModel", "ImportanceRanking",
    "ModelError", "ModelCompatError", "FingerprintMismatch", "VotingTie", "LinearModel", "NaiveBayesModel",
    "TreeModel", "ForestModel", "MLPModel", "VotingModel", "train", "predict", "predict_proba",
    "feature_importance", "save_model", "load_model", "model_to_dict", "model_from_dict",
]
