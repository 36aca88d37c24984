"""Binary classification metrics with machine (label 1) as the positive class."""

from __future__ import annotations

import math
from dataclasses import dataclass, fields
from typing import Sequence

import numpy as np

METRIC_NAMES = ("accuracy", "precision", "recall", "f1")


@dataclass(frozen=True)
class Metrics:
    accuracy: float
    precision: float
    recall: float
    f1: float
    # set when the corresponding denominator was zero and the value defaulted to 0
    precision_undefined: bool = False
    recall_undefined: bool = False

    def values(self) -> tuple[float, float, float, float]:
        return (self.accuracy, self.precision, self.recall, self.f1)


def compute_metrics(predictions, truth) -> Metrics:
    p = np.asarray(predictions)
    t = np.asarray(truth)
    if p.shape != t.shape or p.ndim != 1:
        raise ValueError("predictions and truth must be 1-D and equally long")
    if len(t) == 0:
        raise ValueError("metrics need at least one prediction")
    tp = int(np.sum((p == 1) & (t == 1)))
    fp = int(np.sum((p == 1) & (t == 0)))
    fn = int(np.sum((p == 0) & (t == 1)))
    tn = int(np.sum((p == 0) & (t == 0)))
    precision = tp / (tp + fp) if tp + fp else 0.0
    recall = tp / (tp + fn) if tp + fn else 0.0
    f1 = 2 * precision * recall / (precision + recall) if precision + recall > 0 else 0.0
    return Metrics((tp + tn) / len(t), precision, recall, f1, tp + fp == 0, tp + fn == 0)


def mean_metrics(per_fold: Sequence[Metrics]) -> Metrics:
    """Field-wise arithmetic mean; a flag is set if any fold set it."""
    n = len(per_fold)
    means = [math.fsum(getattr(m, name) for m in per_fold) / n for name in METRIC_NAMES]
    flags = [any(getattr(m, f.name) for m in per_fold) for f in fields(Metrics) if f.name.endswith("undefined")]
    return Metrics(*means, *flags)
