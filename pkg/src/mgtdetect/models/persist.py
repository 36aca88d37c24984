"""Versioned JSON persistence for trained models."""

from __future__ import annotations

import json
from pathlib import Path

from .base import ModelCompatError, TrainedModel

FORMAT = "mgtdetect-model"
VERSION = 1


def _classes():
    from .forest import ForestModel
    from .linear import LinearModel
    from .mlp import MLPModel
    from .naive_bayes import NaiveBayesModel
    from .tree import TreeModel
    from .voting import VotingModel

    return {"logreg": LinearModel, "sgd_linear": LinearModel, "svm_linear": LinearModel, "mnb": NaiveBayesModel,
            "tree": TreeModel, "forest": ForestModel, "mlp": MLPModel, "voting": VotingModel}


def model_to_dict(model: TrainedModel) -> dict:
    return {"format": FORMAT, "version": VERSION, "kind": model.kind, "seed": model.seed,
            "fingerprint": model.fingerprint, "feature_names": list(model.feature_names), "params": model.params()}


def model_from_dict(d: dict) -> TrainedModel:
    if d.get("format") != FORMAT or d.get("version") != VERSION:
        raise ModelCompatError(f"unsupported model format {d.get('format')!r} version {d.get('version')!r}")
    classes = _classes()
    if d.get("kind") not in classes:
        raise ModelCompatError(f"unknown model kind {d.get('kind')!r}")
    model = classes[d["kind"]].from_params(d["kind"], d["feature_names"], d["seed"], d["params"])
    if model.fingerprint != d["fingerprint"]:
        raise ModelCompatError("stored fingerprint does not match stored feature names")
    return model


def save_model(model: TrainedModel, path: str | Path, featurizer: dict | None = None) -> None:
    """Write the model, optionally bundling the serialized featurizer that produced its inputs."""
    payload = model_to_dict(model)
    if featurizer is not None:
        payload["featurizer"] = featurizer
    Path(path).write_text(json.dumps(payload, sort_keys=True), encoding="utf-8")


def load_model(path: str | Path) -> tuple[TrainedModel, dict | None]:
    try:
        payload = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ModelCompatError(f"{path}: not a model file ({exc})") from None
    if not isinstance(payload, dict):
        raise ModelCompatError(f"{path}: not a model file")
    return model_from_dict(payload), payload.get("featurizer")
