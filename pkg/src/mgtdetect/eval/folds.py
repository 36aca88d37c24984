"""Stratified k-fold partitions."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class FoldPlan:
    k: int
    assignments: np.ndarray  # doc index -> fold id
    seed: int

    def test_indices(self, fold: int) -> np.ndarray:
        return np.flatnonzero(self.assignments == fold)

    def train_indices(self, fold: int) -> np.ndarray:
        return np.flatnonzero(self.assignments != fold)

    def splits(self):
        for f in range(self.k):
            yield f, self.train_indices(f), self.test_indices(f)


def stratified_kfold(labels, k: int = 5, seed: int = 0) -> FoldPlan:
    """Shuffle each class with the seeded generator, then deal its members to folds
    round-robin; the dealing position carries over from one class to the next so
    fold sizes stay within one document of each other."""
    labels = np.asarray(labels)
    if k < 2:
        raise ValueError("k must be at least 2")
    rng = np.random.default_rng(seed)
    assignments = np.full(len(labels), -1, dtype=np.int64)
    offset = 0
    for c in np.unique(labels):
        members = np.flatnonzero(labels == c)
        if len(members) < k:
            raise ValueError(f"class {c} has {len(members)} members, fewer than k={k}")
        members = rng.permutation(members)
        assignments[members] = (offset + np.arange(len(members))) % k
        offset += len(members)
    return FoldPlan(k, assignments, seed)
