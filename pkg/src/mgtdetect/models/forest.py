"""Random forest: bootstrap CART trees with sqrt(m) candidate features per split."""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .base import FeatureMatrix, TrainConfig, TrainedModel, check_trainable, sample_weights
from .tree import TreeArrays, column_source, grow_tree, normalized, predict_csr


@dataclass(frozen=True, eq=False)
class ForestModel(TrainedModel):
    trees: tuple[TreeArrays, ...] = field(default=())

    def votes(self, X: FeatureMatrix) -> np.ndarray:
        """(n_trees, n) hard votes; a tree leaf with value >= 0.5 votes 1."""
        self._check(X)
        Xc = predict_csr(X)
        return np.array([(t.leaf_values(Xc) >= 0.5) for t in self.trees], dtype=np.int64)

    def _proba(self, X: FeatureMatrix) -> np.ndarray:
        return self.votes(X).mean(axis=0)

    def importances(self) -> np.ndarray:
        per_tree = [normalized(t.importances) for t in self.trees if t.importances.sum() > 0]
        if not per_tree:
            return np.zeros(len(self.feature_names))
        return normalized(np.mean(per_tree, axis=0))

    def params(self) -> dict:
        return {"trees": [t.to_dict() for t in self.trees]}

    @classmethod
    def from_params(cls, kind, names, seed, p):
        return cls(kind, names, seed, tuple(TreeArrays.from_dict(t) for t in p["trees"]))


def train_forest(F: FeatureMatrix, config: TrainConfig) -> ForestModel:
    """Tree i draws its bootstrap sample and split features from ``default_rng([seed, i])``,
    so the result does not depend on the thread count."""
    check_trainable(F)
    n, m = F.shape
    sw = sample_weights(F.y, config.class_weight)
    cols = column_source(F)
    max_features = max(1, int(math.sqrt(m)))

    def one(i: int) -> TreeArrays:
        rng = np.random.default_rng([config.seed, i])
        counts = np.bincount(rng.integers(0, n, n), minlength=n)
        tree_seed = int(rng.integers(1, 2**63))
        return grow_tree(cols, m, n, F.y, sw * counts, max_features, config.max_depth,
                         config.min_samples_split, tree_seed)

    if config.threads > 1:
        with ThreadPoolExecutor(config.threads) as pool:
            trees = list(pool.map(one, range(config.n_trees)))
    else:
        trees = [one(i) for i in range(config.n_trees)]
    return ForestModel("forest", F.names, config.seed, tuple(trees))
