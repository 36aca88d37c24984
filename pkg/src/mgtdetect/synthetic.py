"""Seeded synthetic corpora with controlled class signals, for tests and experiment scripts."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import resources
from .corpus import HUMAN, MACHINE, CleanDocument, Corpus, make_document

_CONSONANTS = "bcdfghklmnprstvz"
_VOWELS = "aeiou"
FUNCTION_WORDS = ("the", "of", "and", "to", "in", "is", "that", "it", "for", "with", "as", "on")
FUNCTION_RATE = 0.25


def word_pool(n: int, seed: int, exclude: frozenset[str] = frozenset()) -> list[str]:
    """n distinct pronounceable pseudo-words (2-3 syllables), none a stopword."""
    rng = np.random.default_rng(seed)
    banned = resources.stopwords() | exclude
    words: dict[str, None] = {}
    while len(words) < n:
        syllables = rng.integers(2, 4)
        w = "".join(rng.choice(list(_CONSONANTS)) + rng.choice(list(_VOWELS)) for _ in range(syllables))
        if rng.random() < 0.3:
            w += rng.choice(list(_CONSONANTS))
        if w not in banned:
            words.setdefault(w, None)
    return list(words)


def _zipf_weights(k: int, exponent: float) -> np.ndarray:
    w = 1.0 / np.arange(1, k + 1) ** exponent
    return w / w.sum()


@dataclass(frozen=True)
class ClassStyle:
    """Generation parameters for one class."""

    sentences: tuple[int, int]  # inclusive range of sentences per document
    sentence_length: tuple[int, int]  # inclusive range of tokens per sentence
    zipf_exponent: float  # larger = less diverse vocabulary use
    exclusive_rate: float  # probability a token comes from the class-exclusive vocabulary


HUMAN_STYLE = ClassStyle((6, 10), (12, 22), 1.0, 0.06)
MACHINE_STYLE = ClassStyle((4, 7), (9, 15), 1.3, 0.06)


def _sentence(rng, n_tokens, shared, weights, exclusive, rate) -> str:
    """Each token is a function word (fixed rate), a class-exclusive word (``rate``)
    or a Zipf draw from the shared vocabulary."""
    picks = rng.choice(len(shared), size=n_tokens, p=weights)
    u = rng.random(n_tokens)
    other = rng.integers(len(exclusive), size=n_tokens) if exclusive else picks
    func = rng.integers(len(FUNCTION_WORDS), size=n_tokens)
    words = [FUNCTION_WORDS[f] if x < FUNCTION_RATE else exclusive[o] if exclusive and x < FUNCTION_RATE + rate
             else shared[p] for p, x, o, f in zip(picks, u, other, func)]
    words[0] = words[0].capitalize()
    return " ".join(words) + "."


def generate(
    n_docs: int,
    seed: int,
    human: ClassStyle = HUMAN_STYLE,
    machine: ClassStyle = MACHINE_STYLE,
    shared_vocab: int = 600,
    exclusive_vocab: int = 80,
) -> Corpus:
    """Balanced corpus (machine gets the extra document when n_docs is odd), ordered by id."""
    rng = np.random.default_rng(seed)
    pool = word_pool(shared_vocab + 2 * exclusive_vocab, seed)
    shared = pool[:shared_vocab]
    exclusive = {HUMAN: pool[shared_vocab:shared_vocab + exclusive_vocab],
                 MACHINE: pool[shared_vocab + exclusive_vocab:]}
    styles = {HUMAN: human, MACHINE: machine}
    weights = {c: _zipf_weights(shared_vocab, styles[c].zipf_exponent) for c in styles}
    docs: list[CleanDocument] = []
    for i in range(n_docs):
        label = MACHINE if i % 2 == 0 else HUMAN
        st = styles[label]
        n_sent = int(rng.integers(st.sentences[0], st.sentences[1] + 1))
        text = " ".join(
            _sentence(rng, int(rng.integers(st.sentence_length[0], st.sentence_length[1] + 1)), shared,
                      weights[label], exclusive[label], st.exclusive_rate)
            for _ in range(n_sent))
        docs.append(make_document(text, label, id=f"doc{i:05d}", source="synthetic"))
    return Corpus.from_documents(docs)


def detection_corpus(n_docs: int = 2000, seed: int = 0) -> Corpus:
    """Class-exclusive vocabulary plus machine-shorter, less diverse documents."""
    return generate(n_docs, seed)


def ablation_corpus(n_docs: int = 400, seed: int = 0, exclusive_rate: float = 0.1) -> Corpus:
    """Equal document lengths (80 tokens) and identical shared-word distributions, so that
    after ablation only sentence length (10 vs 16 tokens) separates the classes."""
    human = ClassStyle((5, 5), (16, 16), 1.0, exclusive_rate)
    machine = ClassStyle((8, 8), (10, 10), 1.0, exclusive_rate)
    return generate(n_docs, seed, human, machine)


def shared_vocab_corpus(n_docs: int = 100, seed: int = 0) -> Corpus:
    """No class-exclusive words; classes differ only in sentence shape."""
    human = ClassStyle((5, 5), (16, 16), 1.0, 0.0)
    machine = ClassStyle((8, 8), (10, 10), 1.0, 0.0)
    return generate(n_docs, seed, human, machine, shared_vocab=60)


def shuffle_labels(corpus: Corpus, seed: int) -> Corpus:
    """Same documents with labels permuted uniformly (class counts preserved)."""
    labels = np.random.default_rng(seed).permutation(corpus.labels)
    docs = [CleanDocument(d.id, d.sentences, d.tokens, d.tokens_nostop, int(l), d.source)
            for d, l in zip(corpus.documents, labels)]
    return Corpus.from_documents(docs)
