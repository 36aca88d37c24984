"""Cross-validated evaluation of classifier kinds and the three-arm ablation experiment."""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Sequence

import numpy as np

from ..corpus import Corpus
from ..models import KINDS, TrainConfig, train
from ..vectorize.ablation import AblationMap, intersection_ablation
from ..vectorize.featurizer import AUGMENTED, TOKEN_ONLY, Featurizer, FeaturizerSpec
from ..vectorize.tfidf import vocabulary_terms
from .folds import FoldPlan, stratified_kfold
from .metrics import Metrics, compute_metrics, mean_metrics

ARMS = ("A", "B", "C")


class InvariantError(AssertionError):
    """An internal guarantee (such as no test-fold leakage) was violated."""


def derive_seed(seed: int, *keys: int) -> int:
    return int(np.random.SeedSequence([seed, *keys]).generate_state(1)[0])


def check_no_leakage(featurizer: Featurizer, train_docs) -> None:
    seen = set()
    for d in train_docs:
        seen.update(d.tokens)
    if featurizer.tfidf is not None:
        leaked = set(vocabulary_terms(featurizer.tfidf)) - seen
        if leaked:
            raise InvariantError(f"TF-IDF vocabulary has {len(leaked)} terms absent from the training fold")
    if featurizer.table is not None:
        leaked = set(featurizer.table.vocab) - seen
        if leaked:
            raise InvariantError(f"embedding vocabulary has {len(leaked)} tokens absent from the training fold")


def order_kinds(kinds: Sequence[str]) -> tuple[str, ...]:
    """Deduplicate, validate, and move voting last so it can reuse trained members."""
    kinds = tuple(dict.fromkeys(kinds))
    unknown = [k for k in kinds if k not in KINDS]
    if unknown:
        raise ValueError(f"unknown model kinds: {', '.join(unknown)}")
    return tuple(k for k in kinds if k != "voting") + (("voting",) if "voting" in kinds else ())


@dataclass(frozen=True)
class EvalReport:
    kinds: tuple[str, ...]
    plan: FoldPlan
    fold_metrics: dict  # kind -> list of Metrics, one per fold
    mean: dict  # kind -> Metrics
    config: dict = field(default_factory=dict)
    ablation: "AblationResult | None" = None

    def mean_accuracy(self) -> float:
        return float(np.mean([self.mean[k].accuracy for k in self.kinds]))


@dataclass(frozen=True)
class AblationResult:
    arms: dict  # "A" | "B" | "C" -> EvalReport
    ablation_map: AblationMap

    def deltas(self) -> dict:
        """Per kind: accuracy of B and C relative to A."""
        a = self.arms["A"].mean
        return {k: {"B-A": self.arms["B"].mean[k].accuracy - a[k].accuracy,
                    "C-A": self.arms["C"].mean[k].accuracy - a[k].accuracy}
                for k in self.arms["A"].kinds}


def _fold_spec(spec: FeaturizerSpec, seed: int, fold: int) -> FeaturizerSpec:
    if spec.embeddings is None:
        return spec
    return replace(spec, embeddings=replace(spec.embeddings, seed=derive_seed(seed, fold, 1000)))


def run_experiment(
    corpus: Corpus,
    spec: FeaturizerSpec = TOKEN_ONLY,
    kinds: Sequence[str] = KINDS,
    k: int = 5,
    seed: int = 0,
    train_config: TrainConfig = TrainConfig(),
    plan: FoldPlan | None = None,
) -> EvalReport:
    """Refit the featurizer on each training fold, train every kind, score the held-out fold.

    Randomness is keyed by (seed, fold, kind index) so results do not depend on
    evaluation order.
    """
    kinds = order_kinds(kinds)
    if not corpus.has_both_classes():
        raise ValueError("evaluation needs documents of both classes")
    labels = np.array(corpus.labels)
    plan = plan or stratified_kfold(labels, k, seed)
    per_fold: dict[str, list[Metrics]] = {kind: [] for kind in kinds}
    for fold, train_idx, test_idx in plan.splits():
        train_docs = [corpus.documents[i] for i in train_idx]
        test_docs = [corpus.documents[i] for i in test_idx]
        featurizer = Featurizer.fit(_fold_spec(spec, seed, fold), train_docs)
        check_no_leakage(featurizer, train_docs)
        X_train = featurizer.transform(train_docs, labels[train_idx])
        X_test = featurizer.transform(test_docs, labels[test_idx])
        trained = {}
        for kind in kinds:
            config = replace(train_config, seed=derive_seed(seed, fold, KINDS.index(kind)))
            model = train(kind, X_train, config, members=trained)
            trained[kind] = model
            per_fold[kind].append(compute_metrics(model.predict(X_test), labels[test_idx]))
    mean = {kind: mean_metrics(per_fold[kind]) for kind in kinds}
    snapshot = {"k": plan.k, "seed": seed, "kinds": list(kinds), "featurizer": spec.to_dict(),
                "train": train_config.to_dict()}
    return EvalReport(kinds, plan, per_fold, mean, snapshot)


def run_ablation_experiment(
    corpus: Corpus,
    kinds: Sequence[str] = ("logreg", "svm_linear", "mnb", "forest"),
    k: int = 5,
    seed: int = 0,
    train_config: TrainConfig = TrainConfig(),
    token_spec: FeaturizerSpec = TOKEN_ONLY,
    augmented_spec: FeaturizerSpec = AUGMENTED,
) -> AblationResult:
    """Arms on identical folds: (A) token features on the raw corpus, (B) token features
    on the ablated corpus, (C) ablated corpus with token, style and embedding features."""
    ablated, amap = intersection_ablation(corpus)
    plan = stratified_kfold(np.array(corpus.labels), k, seed)
    arms = {
        "A": run_experiment(corpus, token_spec, kinds, k, seed, train_config, plan),
        "B": run_experiment(ablated, token_spec, kinds, k, seed, train_config, plan),
        "C": run_experiment(ablated, augmented_spec, kinds, k, seed, train_config, plan),
    }
    return AblationResult(arms, amap)
