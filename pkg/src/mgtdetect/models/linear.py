"""Linear classifiers: L2 logistic regression (full-batch GD), logistic-loss SGD,
and a hinge-loss linear SVM trained by subgradient descent."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp
from numba import njit
from scipy.special import expit

from .base import FeatureMatrix, TrainConfig, TrainedModel, check_trainable, sample_weights


def _scores(X, w: np.ndarray, b: float) -> np.ndarray:
    return np.asarray(X @ w).ravel() + b


def logistic_loss_grad(w: np.ndarray, b: float, X, y: np.ndarray, l2: float, sw: np.ndarray | None = None):
    """Weighted mean logistic loss + (l2/2)||w||^2 and its gradient in (w, b)."""
    sw = np.ones(len(y)) if sw is None else sw
    z = _scores(X, w, b)
    total = sw.sum()
    # log(1 + e^z) - y z, computed stably
    loss = float(sw @ (np.logaddexp(0.0, z) - y * z)) / total + 0.5 * l2 * float(w @ w)
    r = sw * (expit(z) - y) / total
    gw = np.asarray(X.T @ r).ravel() + l2 * w
    return loss, gw, float(r.sum())


def hinge_loss_grad(w: np.ndarray, b: float, X, y: np.ndarray, l2: float, sw: np.ndarray | None = None):
    """Weighted mean hinge loss + (l2/2)||w||^2 and a subgradient (exact off the hinge)."""
    sw = np.ones(len(y)) if sw is None else sw
    s = 2.0 * y - 1.0
    margin = 1.0 - s * _scores(X, w, b)
    active = margin > 0
    total = sw.sum()
    loss = float(sw @ np.where(active, margin, 0.0)) / total + 0.5 * l2 * float(w @ w)
    r = -(sw * s * active) / total
    gw = np.asarray(X.T @ r).ravel() + l2 * w
    return loss, gw, float(r.sum())


def _lipschitz(X, sw: np.ndarray, l2: float, iters: int = 50) -> float:
    """Upper estimate of the logistic-loss gradient Lipschitz constant (bias included)."""
    n, m = X.shape
    total = sw.sum()
    v = np.random.default_rng(0).standard_normal(m + 1)
    lam = 1.0
    for _ in range(iters):
        v /= np.linalg.norm(v)
        av = sw * (_scores(X, v[:m], v[m]))
        u = np.concatenate([np.asarray(X.T @ av).ravel(), [av.sum()]])
        lam = float(np.linalg.norm(u))
        v = u
    return 1.05 * lam / (4.0 * total) + l2


@dataclass(frozen=True, eq=False)
class LinearModel(TrainedModel):
    weights: np.ndarray = field(default=None)
    bias: float = 0.0
    n_iter: int = 0

    def decision(self, X: FeatureMatrix) -> np.ndarray:
        self._check(X)
        return _scores(X.X, self.weights, self.bias)

    def _proba(self, X: FeatureMatrix) -> np.ndarray:
        return expit(_scores(X.X, self.weights, self.bias))

    def _predict(self, X: FeatureMatrix) -> np.ndarray:
        # sign rule; a zero score goes to the positive class
        return (_scores(X.X, self.weights, self.bias) >= 0).astype(np.int64)

    def importances(self) -> np.ndarray:
        return np.abs(self.weights)

    def params(self) -> dict:
        return {"weights": self.weights.tolist(), "bias": self.bias, "n_iter": self.n_iter}

    @classmethod
    def from_params(cls, kind, names, seed, p):
        return cls(kind, names, seed, np.array(p["weights"], dtype=float), float(p["bias"]), int(p["n_iter"]))


def train_logreg(F: FeatureMatrix, config: TrainConfig) -> LinearModel:
    check_trainable(F)
    X, y = F.X, F.y.astype(float)
    sw = sample_weights(F.y, config.class_weight)
    step = 1.0 / _lipschitz(X, sw, config.l2)
    w = np.zeros(X.shape[1])
    b = 0.0
    it = 0
    for it in range(1, config.max_iter + 1):
        _, gw, gb = logistic_loss_grad(w, b, X, y, config.l2, sw)
        if np.sqrt(gw @ gw + gb * gb) < config.tol:
            break
        w -= step * gw
        b -= step * gb
    return LinearModel("logreg", F.names, config.seed, w, b, it)


def train_svm(F: FeatureMatrix, config: TrainConfig) -> LinearModel:
    check_trainable(F)
    X, y = F.X, F.y.astype(float)
    sw = sample_weights(F.y, config.class_weight)
    sq = np.asarray(X.multiply(X).sum(axis=1)).ravel() if sp.issparse(X) else np.einsum("ij,ij->i", X, X)
    scale = max(1.0, float(sq.mean()))
    w = np.zeros(X.shape[1])
    b = 0.0
    best = (np.inf, w.copy(), b, 0)
    for t in range(1, config.svm_iter + 1):
        loss, gw, gb = hinge_loss_grad(w, b, X, y, config.l2, sw)
        if loss < best[0]:
            best = (loss, w.copy(), b, t - 1)
        eta = config.svm_eta0 / (scale * np.sqrt(t))
        w -= eta * gw
        b -= eta * gb
    loss, _, _ = hinge_loss_grad(w, b, X, y, config.l2, sw)
    if loss < best[0]:
        best = (loss, w, b, config.svm_iter)
    return LinearModel("svm_linear", F.names, config.seed, best[1], best[2], best[3])


@njit(cache=True)
def _sgd_epochs(indptr, indices, data, y, sw, order, eta0, l2, m):
    v = np.zeros(m)
    scale = 1.0
    b = 0.0
    t = 0
    for e in range(order.shape[0]):
        for k in range(order.shape[1]):
            i = order[e, k]
            eta = eta0 / (1.0 + eta0 * l2 * t)
            t += 1
            z = b
            for p in range(indptr[i], indptr[i + 1]):
                z += scale * v[indices[p]] * data[p]
            if z >= 0:
                prob = 1.0 / (1.0 + np.exp(-z))
            else:
                ez = np.exp(z)
                prob = ez / (1.0 + ez)
            g = sw[i] * (prob - y[i])
            scale *= 1.0 - eta * l2
            for p in range(indptr[i], indptr[i + 1]):
                v[indices[p]] -= eta * g * data[p] / scale
            b -= eta * g
            if scale < 1e-9:
                for j in range(m):
                    v[j] *= scale
                scale = 1.0
    return v * scale, b


def train_sgd(F: FeatureMatrix, config: TrainConfig) -> LinearModel:
    """Per-sample SGD on the L2 logistic loss; step eta0 / (1 + eta0 * l2 * t)."""
    check_trainable(F)
    X = F.csr()
    n = X.shape[0]
    sw = sample_weights(F.y, config.class_weight)
    sw = sw / sw.mean()
    rng = np.random.default_rng(config.seed)
    order = np.array([rng.permutation(n) for _ in range(config.sgd_epochs)], dtype=np.int64).reshape(config.sgd_epochs, n)
    w, b = _sgd_epochs(X.indptr.astype(np.int64), X.indices.astype(np.int64), X.data, F.y.astype(float), sw,
                       order, config.sgd_eta0, config.l2, X.shape[1])
    return LinearModel("sgd_linear", F.names, config.seed, w, float(b), config.sgd_epochs)
