"""TF-IDF with smoothed idf and per-document L2 normalization."""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import asdict, dataclass
from typing import Iterable, Sequence

import numpy as np
import scipy.sparse as sp

from ..corpus import CleanDocument, Corpus
from ..text import tokenize


@dataclass(frozen=True)
class TfidfConfig:
    min_df: int = 2
    max_features: int | None = None
    sublinear: bool = False
    ngram_max: int = 1
    drop_stopwords: bool = True


@dataclass(frozen=True)
class DocVector:
    """One document's feature vector; ``empty`` marks an all-OOV (zero) vector."""

    values: np.ndarray | sp.csr_matrix
    empty: bool


class VocabularyError(ValueError):
    pass


def document_tokens(docs, drop_stopwords: bool) -> list[Sequence[str]]:
    """Token lists from a Corpus, CleanDocuments, raw strings or token sequences."""
    if isinstance(docs, Corpus):
        docs = docs.documents
    out = []
    for d in docs:
        if isinstance(d, CleanDocument):
            out.append(d.tokens_nostop if drop_stopwords else d.tokens)
        elif isinstance(d, str):
            out.append(tokenize(d, drop_stopwords=drop_stopwords))
        else:
            out.append(list(d))
    return out


def ngrams(tokens: Sequence[str], ngram_max: int) -> list[str]:
    grams = list(tokens)
    for n in range(2, ngram_max + 1):
        grams += [" ".join(tokens[i:i + n]) for i in range(len(tokens) - n + 1)]
    return grams


class TfidfModel:
    def __init__(self, vocabulary: dict[str, int], idf: np.ndarray, config: TfidfConfig):
        if len(vocabulary) != len(idf):
            raise ValueError("idf length does not match vocabulary")
        self.vocabulary = vocabulary
        self.idf = np.asarray(idf, dtype=float)
        self.config = config

    @property
    def feature_names(self) -> list[str]:
        names = [""] * len(self.vocabulary)
        for term, j in self.vocabulary.items():
            names[j] = term
        return names

    def transform(self, docs) -> sp.csr_matrix:
        token_lists = document_tokens(docs, self.config.drop_stopwords)
        indptr, indices, data = [0], [], []
        for tokens in token_lists:
            counts = Counter(g for g in ngrams(tokens, self.config.ngram_max) if g in self.vocabulary)
            cols = sorted(self.vocabulary[g] for g in counts)
            inv = {self.vocabulary[g]: c for g, c in counts.items()}
            vals = np.array([inv[j] for j in cols], dtype=float)
            if self.config.sublinear:
                vals = 1.0 + np.log(vals)
            vals = vals * self.idf[cols]
            norm = math.sqrt(float(vals @ vals)) if len(vals) else 0.0
            if norm > 0:
                vals = vals / norm
            indices.extend(cols)
            data.extend(vals.tolist())
            indptr.append(len(indices))
        shape = (len(token_lists), len(self.vocabulary))
        return sp.csr_matrix((np.array(data, dtype=float), np.array(indices, dtype=np.int64), np.array(indptr)), shape=shape)

    def to_dict(self) -> dict:
        return {"vocabulary": self.feature_names, "idf": self.idf.tolist(), "config": asdict(self.config)}

    @classmethod
    def from_dict(cls, payload: dict) -> "TfidfModel":
        vocab = {t: j for j, t in enumerate(payload["vocabulary"])}
        return cls(vocab, np.array(payload["idf"], dtype=float), TfidfConfig(**payload["config"]))


def fit_tfidf(docs, config: TfidfConfig = TfidfConfig()) -> TfidfModel:
    """Vocabulary = terms with document frequency >= min_df, optionally capped at
    the ``max_features`` most frequent (ties alphabetical); idf = ln((1+N)/(1+df)) + 1."""
    token_lists = document_tokens(docs, config.drop_stopwords)
    if not token_lists:
        raise VocabularyError("cannot fit on an empty corpus")
    df: Counter[str] = Counter()
    tf: Counter[str] = Counter()
    for tokens in token_lists:
        grams = ngrams(tokens, config.ngram_max)
        tf.update(grams)
        df.update(set(grams))
    terms = [t for t, c in df.items() if c >= config.min_df]
    if config.max_features is not None:
        terms = sorted(terms, key=lambda t: (-tf[t], t))[: config.max_features]
    if not terms:
        raise VocabularyError("empty vocabulary after filtering")
    terms.sort()
    n = len(token_lists)
    idf = np.array([math.log((1 + n) / (1 + df[t])) + 1.0 for t in terms])
    return TfidfModel({t: j for j, t in enumerate(terms)}, idf, config)


def transform_tfidf(model: TfidfModel, doc) -> DocVector:
    row = model.transform([doc])
    return DocVector(row, row.nnz == 0)


def vocabulary_terms(model: TfidfModel) -> Iterable[str]:
    """Unigram components of every vocabulary entry (for leakage checks)."""
    for term in model.vocabulary:
        yield from term.split(" ")
