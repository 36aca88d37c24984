"""Gunning Fog, SMOG, Dale-Chall, Flesch Reading Ease and Coleman-Liau.

Formulas run over stopword-retaining, case-preserving words taken from the
document's sentences; digit runs are not words.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Collection

from . import resources
from .corpus import HUMAN, MACHINE, CleanDocument, Corpus, make_document
from .stats import ComparisonTable, compare
from .text import word_tokens

VOWELS = frozenset("aeiouy")
_VOWEL_GROUP = re.compile(r"[aeiouy]+")
SMOG_MIN_SENTENCES = 30

METRICS = ("gunning_fog", "smog", "dale_chall", "flesch_reading_ease", "coleman_liau")


class DegenerateDocument(ValueError):
    pass


def count_syllables(word: str) -> int:
    """Vowel-group syllable estimate.

    A final ``e`` preceded by a consonant is silent unless the word ends in
    consonant + ``le``. Never returns less than 1.
    """
    w = "".join(ch for ch in word.lower() if ch.isalpha())
    count = len(_VOWEL_GROUP.findall(w))
    if len(w) >= 2 and w[-1] == "e" and w[-2] not in VOWELS:
        consonant_le = len(w) >= 3 and w[-2] == "l" and w[-3] not in VOWELS
        if not consonant_le:
            count -= 1
    return max(count, 1)


@dataclass(frozen=True)
class TextCounts:
    sentences: int
    words: int
    syllables: int
    letters: int
    complex_words: int  # >= 3 syllables, not proper nouns, not hyphenated
    polysyllables: int  # >= 3 syllables
    word_list: tuple[str, ...]


def text_counts(doc: CleanDocument | str) -> TextCounts:
    if isinstance(doc, str):
        doc = make_document(doc)
    words, syllables, letters, complex_words, poly = [], 0, 0, 0, 0
    for sentence in doc.sentences:
        for i, w in enumerate(word_tokens(sentence)):
            s = count_syllables(w)
            words.append(w)
            syllables += s
            letters += sum(1 for ch in w if ch.isalpha())
            if s >= 3:
                poly += 1
                proper = i > 0 and w[0].isupper()
                if not proper and "-" not in w:
                    complex_words += 1
    return TextCounts(len(doc.sentences), len(words), syllables, letters, complex_words, poly, tuple(words))


def _require(counts: TextCounts, words: bool = True, sentences: bool = True) -> None:
    if (sentences and counts.sentences == 0) or (words and counts.words == 0):
        raise DegenerateDocument("degenerate document")


def _counts(doc: CleanDocument | str | TextCounts) -> TextCounts:
    return doc if isinstance(doc, TextCounts) else text_counts(doc)


def gunning_fog(doc: CleanDocument | str | TextCounts) -> float:
    c = _counts(doc)
    _require(c)
    return 0.4 * (c.words / c.sentences + 100.0 * c.complex_words / c.words)


def smog(doc: CleanDocument | str | TextCounts) -> float:
    c = _counts(doc)
    _require(c, words=False)
    return 1.0430 * math.sqrt(c.polysyllables * 30.0 / c.sentences) + 3.1291


def _easy_forms(word: str) -> list[str]:
    forms = [word]
    if word.endswith("es"):
        forms.append(word[:-2])
    if word.endswith("s"):
        forms.append(word[:-1])
    if word.endswith("ed"):
        forms += [word[:-2], word[:-1]]
    if word.endswith("ing"):
        forms += [word[:-3], word[:-3] + "e"]
    return forms


def is_difficult(word: str, easy_words: Collection[str]) -> bool:
    return not any(f in easy_words for f in _easy_forms(word.lower()))


def dale_chall(doc: CleanDocument | str | TextCounts, easy_words: Collection[str] | None = None) -> float:
    if easy_words is None:
        easy_words = resources.easy_words()
    if not easy_words:
        raise ValueError("empty easy-word list")
    c = _counts(doc)
    _require(c)
    difficult = sum(1 for w in c.word_list if is_difficult(w, easy_words))
    pct = 100.0 * difficult / c.words
    score = 0.1579 * pct + 0.0496 * (c.words / c.sentences)
    if pct > 5:
        score += 3.6365
    return score


def flesch_reading_ease(doc: CleanDocument | str | TextCounts) -> float:
    c = _counts(doc)
    _require(c)
    return 206.835 - 1.015 * (c.words / c.sentences) - 84.6 * (c.syllables / c.words)


def coleman_liau(doc: CleanDocument | str | TextCounts) -> float:
    c = _counts(doc)
    _require(c, sentences=False)
    letters_per_100 = 100.0 * c.letters / c.words
    sentences_per_100 = 100.0 * c.sentences / c.words
    return 0.0588 * letters_per_100 - 0.296 * sentences_per_100 - 15.8


@dataclass(frozen=True)
class ReadabilityScores:
    gunning_fog: float
    smog: float
    dale_chall: float
    flesch_reading_ease: float
    coleman_liau: float
    smog_short_sample: bool = False  # fewer than 30 sentences

    def as_dict(self) -> dict[str, float]:
        return {m: getattr(self, m) for m in METRICS}


def readability_scores(doc: CleanDocument | str, easy_words: Collection[str] | None = None) -> ReadabilityScores:
    c = text_counts(doc)
    _require(c)
    return ReadabilityScores(
        gunning_fog=gunning_fog(c),
        smog=smog(c),
        dale_chall=dale_chall(c, easy_words),
        flesch_reading_ease=flesch_reading_ease(c),
        coleman_liau=coleman_liau(c),
        smog_short_sample=c.sentences < SMOG_MIN_SENTENCES,
    )


def readability_rows(corpus: Corpus, easy_words: Collection[str] | None = None):
    values = {m: ([], []) for m in METRICS}
    skipped = 0
    for doc in corpus.documents:
        try:
            scores = readability_scores(doc, easy_words)
        except DegenerateDocument:
            skipped += 1
            continue
        side = 1 if doc.label == MACHINE else 0
        for m, v in scores.as_dict().items():
            values[m][side].append(v)
    return values, skipped


def readability_report(corpus: Corpus, easy_words: Collection[str] | None = None) -> ComparisonTable:
    """Per-class mean (SD) of the five indices; Welch tests when both classes are present."""
    values, skipped = readability_rows(corpus, easy_words)
    rows = compare("readability", values)
    n_h = sum(1 for d in corpus.documents if d.label == HUMAN)
    return ComparisonTable(tuple(rows), n_h, len(corpus) - n_h, skipped)
