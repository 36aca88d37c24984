"""Multinomial naive Bayes with Laplace smoothing."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp
from scipy.special import logsumexp

from .base import FeatureMatrix, ModelError, TrainConfig, TrainedModel, check_trainable, sample_weights


@dataclass(frozen=True, eq=False)
class NaiveBayesModel(TrainedModel):
    class_log_prior: np.ndarray = field(default=None)  # (2,)
    feature_log_prob: np.ndarray = field(default=None)  # (2, m)
    alpha: float = 1.0

    def joint_log_likelihood(self, X: FeatureMatrix) -> np.ndarray:
        _check_nonnegative(X)
        return np.asarray(X.X @ self.feature_log_prob.T) + self.class_log_prior

    def posterior(self, X: FeatureMatrix) -> np.ndarray:
        """(n, 2) class posteriors."""
        self._check(X)
        jll = self.joint_log_likelihood(X)
        return np.exp(jll - logsumexp(jll, axis=1, keepdims=True))

    def _proba(self, X: FeatureMatrix) -> np.ndarray:
        return self.posterior(X)[:, 1]

    def params(self) -> dict:
        return {"class_log_prior": self.class_log_prior.tolist(),
                "feature_log_prob": self.feature_log_prob.tolist(), "alpha": self.alpha}

    @classmethod
    def from_params(cls, kind, names, seed, p):
        return cls(kind, names, seed, np.array(p["class_log_prior"]), np.array(p["feature_log_prob"]), p["alpha"])


def _check_nonnegative(X: FeatureMatrix) -> None:
    values = X.X.data if sp.issparse(X.X) else X.X
    if values.size and values.min() < 0:
        raise ModelError("multinomial naive Bayes requires nonnegative feature values")


def train_mnb(F: FeatureMatrix, config: TrainConfig, alpha: float = 1.0) -> NaiveBayesModel:
    """P(c) from (weighted) class frequencies; P(f|c) = (N_cf + alpha) / (N_c + alpha m)."""
    check_trainable(F)
    _check_nonnegative(F)
    sw = sample_weights(F.y, config.class_weight)
    m = F.shape[1]
    counts = np.zeros((2, m))
    prior = np.zeros(2)
    for c in (0, 1):
        mask = F.y == c
        counts[c] = np.asarray(F.X[mask].T @ sw[mask]).ravel()
        prior[c] = sw[mask].sum()
    smoothed = counts + alpha
    flp = np.log(smoothed) - np.log(smoothed.sum(axis=1, keepdims=True))
    return NaiveBayesModel("mnb", F.names, config.seed, np.log(prior / prior.sum()), flp, alpha)
