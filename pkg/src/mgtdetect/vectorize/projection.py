"""Two-dimensional PCA projection of document vectors."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class Projection:
    points: np.ndarray  # (n, 2), input order
    explained_variance: np.ndarray  # (2,)
    explained_ratio: np.ndarray  # (2,)


def project_2d(vectors) -> Projection:
    """Project onto the top two principal axes of the centered data.

    Each axis is oriented so that its largest-magnitude loading is positive.
    """
    X = np.asarray(vectors, dtype=float)
    if X.ndim != 2 or X.shape[0] < 3 or X.shape[1] < 2:
        raise ValueError("need at least 3 vectors of dimension >= 2")
    Xc = X - X.mean(axis=0)
    _, s, vt = np.linalg.svd(Xc, full_matrices=False)
    var = s**2 / (X.shape[0] - 1)
    total = var.sum()
    if total <= 0:
        raise ValueError("zero-variance input")
    axes = vt[:2].copy()
    for k in range(2):
        if axes[k, np.argmax(np.abs(axes[k]))] < 0:
            axes[k] = -axes[k]
    explained = np.zeros(2)
    explained[: min(2, len(var))] = var[:2]
    return Projection(Xc @ axes.T, explained, explained / total)
