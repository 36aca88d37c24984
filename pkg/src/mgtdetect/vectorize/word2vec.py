"""Skip-gram word2vec with negative sampling, trained by plain SGD.

The inner loop is compiled with numba. Training is sequential and draws its
negatives from a linear congruential generator seeded from ``config.seed``,
so two runs with the same seed produce bit-identical tables.
"""

from __future__ import annotations

import json
import math
from collections import Counter
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np
from numba import njit

from .tfidf import DocVector, document_tokens

FORMAT_MAGIC = "mgtdetect-embeddings"
FORMAT_VERSION = 1
_NEG_TABLE_SIZE = 1_000_000


@dataclass(frozen=True)
class Word2VecConfig:
    dimension: int = 100
    window: int = 5
    negatives: int = 5
    epochs: int = 5
    learning_rate: float = 0.025
    min_learning_rate: float = 0.0001
    min_count: int = 1
    seed: int = 0
    ns_exponent: float = 0.75
    drop_stopwords: bool = False


@dataclass
class EmbeddingTable:
    vocab: list[str]
    vectors: np.ndarray
    config: Word2VecConfig
    epoch_losses: list[float] = field(default_factory=list)
    context_vectors: np.ndarray | None = None  # output-side weights; kept in memory only

    def __post_init__(self):
        self.index = {t: i for i, t in enumerate(self.vocab)}

    @property
    def dimension(self) -> int:
        return self.vectors.shape[1]

    def __contains__(self, token: str) -> bool:
        return token in self.index

    def __getitem__(self, token: str) -> np.ndarray:
        return self.vectors[self.index[token]]

    def save(self, path: str | Path) -> None:
        header = {"dimension": self.dimension, "vocab_size": len(self.vocab), "seed": self.config.seed,
                  "config": asdict(self.config), "epoch_losses": self.epoch_losses}
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(f"{FORMAT_MAGIC} {FORMAT_VERSION}\n")
            fh.write(json.dumps(header, sort_keys=True) + "\n")
            for token, vec in zip(self.vocab, self.vectors):
                fh.write(token + " " + " ".join(repr(float(v)) for v in vec) + "\n")

    @classmethod
    def load(cls, path: str | Path) -> "EmbeddingTable":
        with open(path, encoding="utf-8") as fh:
            magic = fh.readline().split()
            if len(magic) != 2 or magic[0] != FORMAT_MAGIC or int(magic[1]) != FORMAT_VERSION:
                raise ValueError(f"{path}: not a version-{FORMAT_VERSION} embedding file")
            header = json.loads(fh.readline())
            vocab, rows = [], []
            for line in fh:
                parts = line.rstrip("\n").split(" ")
                vocab.append(parts[0])
                rows.append([float(x) for x in parts[1:]])
        vectors = np.array(rows, dtype=float).reshape(len(vocab), header["dimension"])
        return cls(vocab, vectors, Word2VecConfig(**header["config"]), header.get("epoch_losses", []))


def sgns_loss_grad(center: np.ndarray, context: np.ndarray, negatives: np.ndarray):
    """Loss -log s(u_o.v) - sum_k log s(-u_k.v) and its gradients.

    Returns (loss, d/d center, d/d context, d/d negatives).
    """
    pos = float(context @ center)
    neg = negatives @ center
    sig_pos = 1.0 / (1.0 + math.exp(-pos))
    sig_neg = 1.0 / (1.0 + np.exp(-neg))
    loss = -math.log(sig_pos) - float(np.sum(np.log(1.0 - sig_neg)))
    g_center = (sig_pos - 1.0) * context + sig_neg @ negatives
    g_context = (sig_pos - 1.0) * center
    g_negatives = sig_neg[:, None] * center[None, :]
    return loss, g_center, g_context, g_negatives


@njit(cache=True)
def _sigmoid(x):
    if x > 30.0:
        return 1.0
    if x < -30.0:
        return 0.0
    return 1.0 / (1.0 + math.exp(-x))


@njit(cache=True)
def _pair_update(w_in, w_out, center, targets, labels, lr, grad_buf):
    """One SGD step on a (center, [context] + negatives) group; returns its loss."""
    dim = w_in.shape[1]
    for d in range(dim):
        grad_buf[d] = 0.0
    loss = 0.0
    for k in range(targets.shape[0]):
        t = targets[k]
        if k > 0 and t == targets[0]:
            continue  # a negative equal to the positive target is skipped
        f = 0.0
        for d in range(dim):
            f += w_in[center, d] * w_out[t, d]
        s = _sigmoid(f)
        if labels[k] == 1:
            loss -= math.log(max(s, 1e-12))
        else:
            loss -= math.log(max(1.0 - s, 1e-12))
        g = (labels[k] - s) * lr
        for d in range(dim):
            grad_buf[d] += g * w_out[t, d]
        for d in range(dim):
            w_out[t, d] += g * w_in[center, d]
    for d in range(dim):
        w_in[center, d] += grad_buf[d]
    return loss


@njit(cache=True)
def _train_epoch(ids, offsets, w_in, w_out, table, window, negatives, lr0, lr_min,
                 words_done, total_words, rng_state):
    dim = w_in.shape[1]
    grad_buf = np.zeros(dim)
    targets = np.empty(negatives + 1, dtype=np.int64)
    labels = np.zeros(negatives + 1, dtype=np.int64)
    labels[0] = 1
    loss_sum = 0.0
    n_pairs = 0
    rnd = rng_state[0]
    n_docs = offsets.shape[0] - 1
    for doc in range(n_docs):
        start = offsets[doc]
        end = offsets[doc + 1]
        for i in range(start, end):
            lr = lr0 - (lr0 - lr_min) * (words_done / total_words)
            if lr < lr_min:
                lr = lr_min
            words_done += 1
            center = ids[i]
            lo = max(start, i - window)
            hi = min(end, i + window + 1)
            for j in range(lo, hi):
                if j == i:
                    continue
                targets[0] = ids[j]
                for k in range(negatives):
                    rnd = rnd * np.uint64(25214903917) + np.uint64(11)
                    targets[k + 1] = table[(rnd >> np.uint64(16)) % np.uint64(table.shape[0])]
                loss_sum += _pair_update(w_in, w_out, center, targets, labels, lr, grad_buf)
                n_pairs += 1
    rng_state[0] = rnd
    return loss_sum, n_pairs, words_done


def sgd_step(w_in: np.ndarray, w_out: np.ndarray, center: int, context: int, negatives: Sequence[int], lr: float) -> float:
    """Apply the compiled update for a single training group in place."""
    targets = np.array([context, *negatives], dtype=np.int64)
    labels = np.zeros(len(targets), dtype=np.int64)
    labels[0] = 1
    return _pair_update(w_in, w_out, center, targets, labels, lr, np.zeros(w_in.shape[1]))


def _negative_table(counts: np.ndarray, exponent: float) -> np.ndarray:
    weights = counts.astype(float) ** exponent
    weights /= weights.sum()
    reps = np.maximum(1, np.round(weights * _NEG_TABLE_SIZE)).astype(np.int64)
    return np.repeat(np.arange(len(counts), dtype=np.int64), reps)


def train_word2vec(docs, config: Word2VecConfig = Word2VecConfig()) -> EmbeddingTable:
    token_lists = document_tokens(docs, config.drop_stopwords)
    freq = Counter(t for tokens in token_lists for t in tokens)
    vocab = sorted(t for t, c in freq.items() if c >= config.min_count)
    index = {t: i for i, t in enumerate(vocab)}
    ids, offsets = [], [0]
    for tokens in token_lists:
        ids.extend(index[t] for t in tokens if t in index)
        offsets.append(len(ids))
    if len(ids) < config.window + 1 or len(vocab) < 2:
        raise ValueError("corpus too small for word2vec training")
    ids_arr = np.array(ids, dtype=np.int64)
    offsets_arr = np.array(offsets, dtype=np.int64)
    counts = np.array([freq[t] for t in vocab])

    rng = np.random.default_rng(config.seed)
    d = config.dimension
    w_in = (rng.random((len(vocab), d)) - 0.5) / d
    w_out = np.zeros((len(vocab), d))
    table = _negative_table(counts, config.ns_exponent)
    rng_state = np.array([np.uint64(config.seed) * np.uint64(2654435761) + np.uint64(1)], dtype=np.uint64)

    total = float(len(ids_arr) * config.epochs)
    done = 0.0
    losses = []
    for _ in range(config.epochs):
        loss_sum, n_pairs, done = _train_epoch(ids_arr, offsets_arr, w_in, w_out, table, config.window,
                                               config.negatives, config.learning_rate,
                                               config.min_learning_rate, done, total, rng_state)
        losses.append(loss_sum / max(n_pairs, 1))
    return EmbeddingTable(vocab, w_in, config, losses, w_out)


def doc_embedding(table: EmbeddingTable, doc) -> DocVector:
    """Mean of the in-vocabulary token vectors; zero vector with ``empty`` set if none."""
    tokens = document_tokens([doc], table.config.drop_stopwords)[0]
    rows = [table.index[t] for t in tokens if t in table.index]
    if not rows:
        return DocVector(np.zeros(table.dimension), True)
    return DocVector(table.vectors[rows].mean(axis=0), False)


def doc_embeddings(table: EmbeddingTable, docs) -> np.ndarray:
    token_lists = document_tokens(docs, table.config.drop_stopwords)
    out = np.zeros((len(token_lists), table.dimension))
    for i, tokens in enumerate(token_lists):
        rows = [table.index[t] for t in tokens if t in table.index]
        if rows:
            out[i] = table.vectors[rows].mean(axis=0)
    return out
