"""Hard-majority voting over trained member models."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .base import FeatureMatrix, ModelError, TrainedModel


class VotingTie(ModelError):
    pass


@dataclass(frozen=True, eq=False)
class VotingModel(TrainedModel):
    members: tuple[TrainedModel, ...] = field(default=())
    tie_to_positive: bool = True

    def __post_init__(self):
        super().__post_init__()
        if not self.members:
            raise ModelError("voting needs at least one member")
        if any(m.fingerprint != self.fingerprint for m in self.members):
            raise ModelError("voting members were trained on different features")

    def _predict(self, X: FeatureMatrix) -> np.ndarray:
        votes = np.sum([m.predict(X) for m in self.members], axis=0)
        twice = 2 * votes
        k = len(self.members)
        if not self.tie_to_positive and np.any(twice == k):
            raise VotingTie("even split among voters and the tie rule is disabled")
        return (twice >= k).astype(np.int64)

    def params(self) -> dict:
        from .persist import model_to_dict

        return {"tie_to_positive": self.tie_to_positive, "members": [model_to_dict(m) for m in self.members]}

    @classmethod
    def from_params(cls, kind, names, seed, p):
        from .persist import model_from_dict

        return cls(kind, names, seed, tuple(model_from_dict(m) for m in p["members"]), p["tie_to_positive"])
