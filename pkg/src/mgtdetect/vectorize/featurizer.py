"""Fit-on-train feature pipelines combining TF-IDF, style and embedding blocks.

Dense blocks (style statistics, document embeddings) are min-max scaled to
[0, 1] using training-fold ranges and clipped, keeping every column
nonnegative for multinomial naive Bayes.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np
import scipy.sparse as sp

from ..corpus import CleanDocument
from ..models.base import FeatureMatrix
from .style import STYLE_FEATURE_NAMES, style_features
from .tfidf import TfidfConfig, TfidfModel, fit_tfidf
from .word2vec import EmbeddingTable, Word2VecConfig, doc_embeddings, train_word2vec


@dataclass(frozen=True)
class FeaturizerSpec:
    tfidf: TfidfConfig | None = TfidfConfig()
    style: bool = False
    embeddings: Word2VecConfig | None = None

    def __post_init__(self):
        if self.tfidf is None and not self.style and self.embeddings is None:
            raise ValueError("featurizer spec selects no feature block")

    def to_dict(self) -> dict:
        return {"tfidf": None if self.tfidf is None else asdict(self.tfidf), "style": self.style,
                "embeddings": None if self.embeddings is None else asdict(self.embeddings)}

    @classmethod
    def from_dict(cls, d: dict) -> "FeaturizerSpec":
        return cls(tfidf=None if d.get("tfidf") is None else TfidfConfig(**d["tfidf"]),
                   style=bool(d.get("style", False)),
                   embeddings=None if d.get("embeddings") is None else Word2VecConfig(**d["embeddings"]))


TOKEN_ONLY = FeaturizerSpec()
AUGMENTED = FeaturizerSpec(style=True, embeddings=Word2VecConfig())


def _style_matrix(docs: list[CleanDocument]) -> np.ndarray:
    rows = []
    for d in docs:
        try:
            rows.append(style_features(d).as_vector())
        except ValueError:
            rows.append(np.zeros(len(STYLE_FEATURE_NAMES)))
    return np.array(rows, dtype=float).reshape(len(docs), len(STYLE_FEATURE_NAMES))


class Featurizer:
    def __init__(self, spec: FeaturizerSpec, tfidf: TfidfModel | None, table: EmbeddingTable | None,
                 lo: np.ndarray, hi: np.ndarray):
        self.spec = spec
        self.tfidf = tfidf
        self.table = table
        self.lo = lo
        self.hi = hi
        names: list[str] = []
        if tfidf is not None:
            names += tfidf.feature_names
        if spec.style:
            names += [f"style:{n}" for n in STYLE_FEATURE_NAMES]
        if table is not None:
            names += [f"w2v:{i}" for i in range(table.dimension)]
        self.names = tuple(names)

    @classmethod
    def fit(cls, spec: FeaturizerSpec, docs) -> "Featurizer":
        docs = list(getattr(docs, "documents", docs))
        tfidf = fit_tfidf(docs, spec.tfidf) if spec.tfidf is not None else None
        table = train_word2vec(docs, spec.embeddings) if spec.embeddings is not None else None
        probe = cls(spec, tfidf, table, np.zeros(0), np.zeros(0))
        dense = probe._dense(docs)
        lo = dense.min(axis=0) if len(docs) else np.zeros(dense.shape[1])
        hi = dense.max(axis=0) if len(docs) else np.ones(dense.shape[1])
        return cls(spec, tfidf, table, lo, hi)

    def _dense(self, docs: list[CleanDocument]) -> np.ndarray:
        blocks = [np.zeros((len(docs), 0))]
        if self.spec.style:
            blocks.append(_style_matrix(docs))
        if self.table is not None:
            blocks.append(doc_embeddings(self.table, docs))
        return np.hstack(blocks)

    def transform(self, docs, labels=None) -> FeatureMatrix:
        docs = list(getattr(docs, "documents", docs))
        blocks = []
        if self.tfidf is not None:
            blocks.append(self.tfidf.transform(docs))
        dense = self._dense(docs)
        if dense.shape[1]:
            span = np.where(self.hi > self.lo, self.hi - self.lo, 1.0)
            scaled = np.clip((dense - self.lo) / span, 0.0, 1.0)
            scaled[:, self.hi <= self.lo] = 0.0
            blocks.append(sp.csr_matrix(scaled))
        X = sp.hstack(blocks, format="csr") if blocks else sp.csr_matrix((len(docs), 0))
        return FeatureMatrix(X, self.names, None if labels is None else np.asarray(labels))

    def to_dict(self) -> dict:
        out = {"spec": self.spec.to_dict(), "lo": self.lo.tolist(), "hi": self.hi.tolist(),
               "tfidf": None if self.tfidf is None else self.tfidf.to_dict(), "embeddings": None}
        if self.table is not None:
            out["embeddings"] = {"vocab": list(self.table.vocab), "vectors": self.table.vectors.tolist(),
                                 "epoch_losses": list(self.table.epoch_losses)}
        return out

    @classmethod
    def from_dict(cls, d: dict) -> "Featurizer":
        spec = FeaturizerSpec.from_dict(d["spec"])
        tfidf = None if d["tfidf"] is None else TfidfModel.from_dict(d["tfidf"])
        table = None
        if d.get("embeddings") is not None:
            e = d["embeddings"]
            table = EmbeddingTable(e["vocab"], np.array(e["vectors"], dtype=float), spec.embeddings,
                                   e["epoch_losses"])
        return cls(spec, tfidf, table, np.array(d["lo"], dtype=float), np.array(d["hi"], dtype=float))


def fit_featurizer(spec: FeaturizerSpec, docs) -> Featurizer:
    return Featurizer.fit(spec, docs)
