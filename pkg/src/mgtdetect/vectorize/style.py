"""Sentence-complexity statistics and a coarse rule-based POS distribution."""

from __future__ import annotations

import math
import re
from dataclasses import dataclass

import numpy as np

from .. import resources
from ..corpus import CleanDocument, make_document
from ..text import tokenize

POS_TAGS = ("noun", "verb", "adjective", "adverb", "pronoun", "determiner", "preposition",
            "conjunction", "number", "punctuation", "proper", "other")

_CLOSED_CLASS = {
    "determiner": "a an the this that these those each every some any no another either neither all both "
                  "my your his her its our their whose many much few several such",
    "pronoun": "i me you he him she it we us they them myself yourself himself herself itself ourselves "
               "themselves mine yours hers ours theirs who whom what which someone something anyone "
               "anything everyone everything nobody nothing somebody anybody everybody",
    "preposition": "of in on at by for with about against between into through during before after above "
                   "below to from up down out off over under around among across behind beyond near "
                   "toward towards upon within without along via per despite throughout beneath",
    "conjunction": "and but or nor so yet because although though while if unless whereas whether until "
                   "than as since",
    "verb": "is are was were be been being am has have had do does did can could will would shall should "
            "may might must",
    "adverb": "not very too also just only then there here now never always often again still even "
              "already soon",
    "other": "oh ah wow hey yes ouch alas hello hi",
}
CLOSED_CLASS = {w: tag for tag, words in _CLOSED_CLASS.items() for w in words.split()}

_ITEM_RE = re.compile(r"<unk>|[^\W\d_](?:[^\W_]|['-])*|\d+|[,;:\"()'\-]")
_PUNCT = frozenset(",;:\"()'-")

STYLE_FEATURE_NAMES = ("mean_sentence_length", "sd_sentence_length", "mean_word_length",
                       "type_token_ratio") + tuple(f"pos_{t}" for t in POS_TAGS)


def _verb_form(word: str) -> bool:
    stems = resources.verb_stems()
    if word in stems:
        return True
    candidates = []
    if word.endswith("ies"):
        candidates.append(word[:-3] + "y")
    if word.endswith("es"):
        candidates.append(word[:-2])
    if word.endswith("s"):
        candidates.append(word[:-1])
    for suffix in ("ed", "ing"):
        if word.endswith(suffix):
            base = word[: -len(suffix)]
            candidates += [base, base + "e"]
            if len(base) >= 2 and base[-1] == base[-2]:
                candidates.append(base[:-1])
            if suffix == "ed" and base.endswith("i"):
                candidates.append(base[:-1] + "y")
    return any(c in stems for c in candidates)


def tag_word(word: str, sentence_initial: bool) -> str:
    """Coarse tag for one token: closed-class lookup, then numbers, proper nouns, suffix rules."""
    if word in _PUNCT:
        return "punctuation"
    if word == "<unk>":
        return "other"
    lower = word.lower()
    if lower in CLOSED_CLASS:
        return CLOSED_CLASS[lower]
    if word.isdigit():
        return "number"
    if word[0].isupper() and not sentence_initial:
        return "proper"
    if lower.endswith("ly") and len(lower) > 4:
        return "adverb"
    if _verb_form(lower):
        return "verb"
    if lower.endswith(("tion", "sion", "ness", "ment", "ity")):
        return "noun"
    if lower.endswith(("ous", "ful", "ive", "al", "able", "ible", "ic")):
        return "adjective"
    return "noun"


def pos_tag(sentence: str) -> list[tuple[str, str]]:
    """Tag words and internal punctuation; sentence-final ``. ! ?`` are not tagged."""
    items = _ITEM_RE.findall(sentence)
    tagged = []
    first_word = True
    for item in items:
        tag = tag_word(item, first_word)
        if item not in _PUNCT:
            first_word = False
        tagged.append((item, tag))
    return tagged


@dataclass(frozen=True)
class StyleFeatures:
    mean_sentence_length: float
    sd_sentence_length: float
    mean_word_length: float
    type_token_ratio: float
    pos: dict

    def as_vector(self) -> np.ndarray:
        head = [self.mean_sentence_length, self.sd_sentence_length, self.mean_word_length, self.type_token_ratio]
        return np.array(head + [self.pos[t] for t in POS_TAGS], dtype=float)


def style_features(doc: CleanDocument | str) -> StyleFeatures:
    if isinstance(doc, str):
        doc = make_document(doc)
    if not doc.sentences:
        raise ValueError("degenerate document")
    lengths = [len(tokenize(s)) for s in doc.sentences]
    mean_len = sum(lengths) / len(lengths)
    sd_len = math.sqrt(sum((x - mean_len) ** 2 for x in lengths) / len(lengths))
    tokens = doc.tokens
    if not tokens:
        raise ValueError("degenerate document")
    mean_word = sum(len(t) for t in tokens) / len(tokens)
    ttr = len(set(tokens)) / len(tokens)
    counts = dict.fromkeys(POS_TAGS, 0)
    for sentence in doc.sentences:
        for _, tag in pos_tag(sentence):
            counts[tag] += 1
    total = sum(counts.values())
    if total == 0:
        raise ValueError("degenerate document")
    return StyleFeatures(mean_len, sd_len, mean_word, ttr, {t: counts[t] / total for t in POS_TAGS})
