"""Vocabulary-intersection ablation: tokens outside the shared vocabulary become ``<unk>``."""

from __future__ import annotations

from dataclasses import dataclass

from ..corpus import HUMAN, LABELS, MACHINE, CleanDocument, Corpus
from ..text import TOKEN_RE, UNK


class AblationError(ValueError):
    pass


@dataclass(frozen=True)
class AblationMap:
    intersection_vocab: frozenset[str]
    replaced_count: dict  # label -> replaced token occurrences


def _ablate_sentence(sentence: str, keep: frozenset[str]) -> str:
    return TOKEN_RE.sub(lambda m: m.group() if m.group().lower() in keep else UNK, sentence)


def intersection_ablation(corpus: Corpus) -> tuple[Corpus, AblationMap]:
    if not corpus.class_vocab[HUMAN] or not corpus.class_vocab[MACHINE]:
        raise AblationError("ablation needs both classes")
    keep = corpus.class_vocab[HUMAN] & corpus.class_vocab[MACHINE]
    if not keep:
        raise AblationError("degenerate ablation: class vocabularies do not intersect")
    replaced = dict.fromkeys(LABELS, 0)
    docs = []
    for d in corpus.documents:
        tokens = tuple(t if t in keep else UNK for t in d.tokens)
        replaced[d.label] += sum(1 for a, b in zip(d.tokens, tokens) if a != b)
        docs.append(CleanDocument(
            id=d.id,
            sentences=tuple(_ablate_sentence(s, keep) for s in d.sentences),
            tokens=tokens,
            tokens_nostop=tuple(t if t in keep else UNK for t in d.tokens_nostop),
            label=d.label,
            source=d.source,
        ))
    return Corpus.from_documents(docs, corpus.dropped), AblationMap(keep, replaced)
