"""Feature matrices, the trained-model base class and training configuration."""

from __future__ import annotations

import hashlib
from dataclasses import asdict, dataclass, field
from typing import Sequence

import numpy as np
import scipy.sparse as sp

KINDS = ("logreg", "tree", "forest", "mnb", "sgd_linear", "svm_linear", "voting", "mlp")
PROBA_KINDS = frozenset({"logreg", "mnb", "forest", "sgd_linear", "mlp"})
IMPORTANCE_KINDS = frozenset({"tree", "forest", "logreg", "sgd_linear", "svm_linear"})


class ModelError(ValueError):
    pass


class FingerprintMismatch(ModelError):
    pass


class ModelCompatError(ModelError):
    """Persisted model has an unknown format or version."""


def fingerprint(names: Sequence[str]) -> str:
    h = hashlib.sha256()
    for name in names:
        h.update(name.encode("utf-8"))
        h.update(b"\x00")
    return h.hexdigest()


@dataclass(frozen=True)
class FeatureMatrix:
    """n documents by m named features, optionally with {0,1} labels."""

    X: np.ndarray | sp.spmatrix
    names: tuple[str, ...]
    y: np.ndarray | None = None

    def __post_init__(self):
        X = self.X
        if sp.issparse(X):
            X = sp.csr_matrix(X, dtype=float)
            X.sort_indices()
            values = X.data
        else:
            X = np.atleast_2d(np.asarray(X, dtype=float))
            values = X
        object.__setattr__(self, "X", X)
        object.__setattr__(self, "names", tuple(self.names))
        if X.shape[1] != len(self.names):
            raise ModelError(f"{X.shape[1]} columns but {len(self.names)} names")
        if len(set(self.names)) != len(self.names):
            raise ModelError("feature names must be unique")
        if not np.all(np.isfinite(values)):
            raise ModelError("feature matrix contains NaN or infinite entries")
        if self.y is not None:
            y = np.asarray(self.y)
            if y.shape != (X.shape[0],):
                raise ModelError("labels do not align with rows")
            if not np.all((y == 0) | (y == 1)):
                raise ModelError("labels must be 0 or 1")
            object.__setattr__(self, "y", y.astype(np.int64))

    @property
    def shape(self) -> tuple[int, int]:
        return self.X.shape

    @property
    def fingerprint(self) -> str:
        return fingerprint(self.names)

    def csr(self) -> sp.csr_matrix:
        return self.X if sp.issparse(self.X) else sp.csr_matrix(self.X)

    def rows(self, idx) -> "FeatureMatrix":
        idx = np.asarray(idx)
        return FeatureMatrix(self.X[idx], self.names, None if self.y is None else self.y[idx])


@dataclass(frozen=True)
class TrainConfig:
    seed: int = 0
    class_weight: str | None = None  # None or "balanced"
    l2: float = 1e-4
    # logreg: full-batch gradient descent
    max_iter: int = 1000
    tol: float = 1e-6
    # sgd_linear
    sgd_epochs: int = 20
    sgd_eta0: float = 0.5
    # svm_linear
    svm_iter: int = 1000
    svm_eta0: float = 50.0
    # trees
    n_trees: int = 100
    max_depth: int | None = None
    min_samples_split: int = 2
    threads: int = 1
    # mlp
    mlp_hidden: int = 64
    mlp_epochs: int = 40
    mlp_lr: float = 0.5
    mlp_batch: int = 32
    mlp_max_inputs: int = 5000
    # voting
    voting_members: tuple[str, ...] = ("logreg", "forest", "mnb")
    tie_to_positive: bool = True

    def to_dict(self) -> dict:
        d = asdict(self)
        d["voting_members"] = list(self.voting_members)
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "TrainConfig":
        d = dict(d)
        if "voting_members" in d:
            d["voting_members"] = tuple(d["voting_members"])
        return cls(**d)


def sample_weights(y: np.ndarray, class_weight: str | None) -> np.ndarray:
    if class_weight is None:
        return np.ones(len(y))
    if class_weight != "balanced":
        raise ModelError(f"unknown class_weight {class_weight!r}")
    counts = np.bincount(y, minlength=2).astype(float)
    return (len(y) / (2.0 * counts))[y]


def check_trainable(X: FeatureMatrix) -> None:
    if X.y is None:
        raise ModelError("training requires labels")
    if X.shape[0] < 2:
        raise ModelError("training requires at least 2 rows")
    if len(np.unique(X.y)) < 2:
        raise ModelError("single-class input: both labels must be present")


@dataclass(frozen=True)
class ImportanceRanking:
    items: tuple[tuple[str, float], ...]

    @classmethod
    def from_values(cls, names: Sequence[str], values: np.ndarray) -> "ImportanceRanking":
        order = sorted(range(len(names)), key=lambda j: (-values[j], j))
        return cls(tuple((names[j], float(values[j])) for j in order))

    def top(self, n: int) -> list[tuple[str, float]]:
        return list(self.items[:n])

    def as_dict(self) -> dict[str, float]:
        return dict(self.items)


@dataclass(frozen=True, eq=False)
class TrainedModel:
    """Common state; subclasses implement ``_predict`` and optionally ``_proba``."""

    kind: str
    feature_names: tuple[str, ...]
    seed: int
    fingerprint: str = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "feature_names", tuple(self.feature_names))
        object.__setattr__(self, "fingerprint", fingerprint(self.feature_names))

    def _check(self, X: FeatureMatrix) -> None:
        if X.fingerprint != self.fingerprint:
            raise FingerprintMismatch(f"{self.kind} model was trained on different features")

    def predict(self, X: FeatureMatrix) -> np.ndarray:
        self._check(X)
        return self._predict(X)

    def predict_proba(self, X: FeatureMatrix) -> np.ndarray:
        if self.kind not in PROBA_KINDS:
            raise ModelError(f"{self.kind} does not produce probabilities")
        self._check(X)
        return self._proba(X)

    def _predict(self, X: FeatureMatrix) -> np.ndarray:
        return (self._proba(X) >= 0.5).astype(np.int64)

    def _proba(self, X: FeatureMatrix) -> np.ndarray:  # pragma: no cover
        raise NotImplementedError

    def importances(self) -> np.ndarray:
        raise ModelError(f"{self.kind} has no feature importances")

    def params(self) -> dict:  # pragma: no cover
        raise NotImplementedError
