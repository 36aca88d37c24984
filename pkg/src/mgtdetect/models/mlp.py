"""One-hidden-layer network: inputs -> ReLU hidden layer -> sigmoid output."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp
from scipy.special import expit

from .base import FeatureMatrix, TrainConfig, TrainedModel, check_trainable, sample_weights

PARAM_NAMES = ("W1", "b1", "W2", "b2")


def forward(params: dict, X):
    A = np.asarray(X @ params["W1"]) + params["b1"]
    H = np.maximum(A, 0.0)
    return H, H @ params["W2"] + params["b2"]


def loss_and_grad(params: dict, X, y: np.ndarray, l2: float = 0.0, sw: np.ndarray | None = None):
    """Weighted mean binary cross-entropy + (l2/2)(|W1|^2 + |W2|^2) and gradients."""
    sw = np.ones(len(y)) if sw is None else sw
    total = sw.sum()
    H, z = forward(params, X)
    W1, W2 = params["W1"], params["W2"]
    loss = float(sw @ (np.logaddexp(0.0, z) - y * z)) / total
    loss += 0.5 * l2 * (float(np.sum(W1 * W1)) + float(W2 @ W2))
    dz = sw * (expit(z) - y) / total
    dH = np.outer(dz, W2) * (H > 0)
    grads = {
        "W1": np.asarray(X.T @ dH) + l2 * W1,
        "b1": dH.sum(axis=0),
        "W2": H.T @ dz + l2 * W2,
        "b2": np.array(dz.sum()),
    }
    return loss, grads


def init_params(d: int, hidden: int, rng: np.random.Generator) -> dict:
    return {
        "W1": rng.standard_normal((d, hidden)) * np.sqrt(2.0 / d),
        "b1": np.zeros(hidden),
        "W2": rng.standard_normal(hidden) * np.sqrt(1.0 / hidden),
        "b2": np.array(0.0),
    }


def select_inputs(X, k: int) -> np.ndarray:
    """Indices of the k columns with the largest sums of absolute values (ties by index)."""
    sums = np.asarray(abs(X).sum(axis=0)).ravel()
    order = np.lexsort((np.arange(len(sums)), -sums))
    return np.sort(order[:k])


@dataclass(frozen=True, eq=False)
class MLPModel(TrainedModel):
    inputs: np.ndarray = field(default=None)
    weights: dict = field(default=None)
    epoch_losses: tuple[float, ...] = ()

    def _proba(self, X: FeatureMatrix) -> np.ndarray:
        _, z = forward(self.weights, X.X[:, self.inputs])
        return expit(z)

    def params(self) -> dict:
        return {"inputs": self.inputs.tolist(), "epoch_losses": list(self.epoch_losses),
                **{k: np.asarray(v).tolist() for k, v in self.weights.items()}}

    @classmethod
    def from_params(cls, kind, names, seed, p):
        weights = {k: np.array(p[k], dtype=float) for k in PARAM_NAMES}
        return cls(kind, names, seed, np.array(p["inputs"], dtype=np.int64), weights, tuple(p["epoch_losses"]))


def train_mlp(F: FeatureMatrix, config: TrainConfig) -> MLPModel:
    """Mini-batch gradient descent with a fixed step size."""
    check_trainable(F)
    inputs = select_inputs(F.X, config.mlp_max_inputs)
    X = F.X[:, inputs]
    if sp.issparse(X):
        X = sp.csr_matrix(X)
    y = F.y.astype(float)
    sw = sample_weights(F.y, config.class_weight)
    rng = np.random.default_rng(config.seed)
    params = init_params(X.shape[1], config.mlp_hidden, rng)
    n = X.shape[0]
    losses = []
    for _ in range(config.mlp_epochs):
        order = rng.permutation(n)
        for s in range(0, n, config.mlp_batch):
            batch = order[s:s + config.mlp_batch]
            _, grads = loss_and_grad(params, X[batch], y[batch], config.l2, sw[batch])
            for k in PARAM_NAMES:
                params[k] = params[k] - config.mlp_lr * grads[k]
        losses.append(loss_and_grad(params, X, y, config.l2, sw)[0])
    return MLPModel("mlp", F.names, config.seed, inputs, params, tuple(losses))
