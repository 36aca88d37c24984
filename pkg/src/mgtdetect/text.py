"""Text cleaning, tokenization and sentence splitting.

The token grammar is ``letter (letter | digit | ' | -)*`` plus standalone digit
runs. ``<unk>`` is recognised as a token so that ablated text round-trips.
"""

from __future__ import annotations

import re
import unicodedata

from . import resources

UNK = "<unk>"

_WORD = r"[^\W\d_](?:[^\W_]|['-])*"
TOKEN_RE = re.compile(rf"<unk>|{_WORD}|\d+")
WORD_RE = re.compile(_WORD)
# word tokens are consumed first so digits inside them survive
_ISOLATED_DIGIT_RE = re.compile(rf"({_WORD})|(?<!\d)\d(?!\d)")
_TERMINAL_RE = re.compile(r"[.!?]+[\"')\]]*")

BASIC_PUNCTUATION = frozenset(".,;:!?'\"()-")

_CHAR_MAP = str.maketrans(
    {
        "‘": "'",
        "’": "'",
        "ʼ": "'",
        "“": '"',
        "”": '"',
        "–": " - ",
        "\u2014": " - ",
    }
)


def _keep_char(ch: str) -> bool:
    if ch in BASIC_PUNCTUATION:
        return True
    cat = unicodedata.category(ch)
    return cat[0] in "LM" or cat == "Nd"


class _KeepTable(dict):
    """str.translate table mapping disallowed characters and whitespace to a space, filled lazily."""

    def __missing__(self, code: int):
        ch = chr(code)
        value = None if (not ch.isspace() and _keep_char(ch)) else " "
        self[code] = value if value is not None else code
        return self[code]


_KEEP = _KeepTable()


def clean_text(raw: str) -> str:
    """Normalize, strip symbols and control characters, drop isolated single digits.

    Disallowed characters become spaces (so ``a©b`` does not fuse into one
    word) and whitespace runs collapse to a single space.
    """
    text = unicodedata.normalize("NFKC", raw).translate(_CHAR_MAP)
    text = text.translate(_KEEP)
    text = _ISOLATED_DIGIT_RE.sub(lambda m: m.group(1) or "", text)
    return " ".join(text.split())


def tokenize(text: str, drop_stopwords: bool = False) -> list[str]:
    tokens = [t.lower() for t in TOKEN_RE.findall(text)]
    if drop_stopwords:
        stop = resources.stopwords()
        tokens = [t for t in tokens if t not in stop]
    return tokens


def word_tokens(text: str) -> list[str]:
    """Case-preserving letter-initial words (no digit runs, no ``<unk>``)."""
    return WORD_RE.findall(text)


def is_english(text: str, min_latin: float = 0.9, min_known: float = 0.05) -> bool:
    letters = [ch for ch in text if ch.isalpha()]
    if not letters:
        return False
    latin = sum(1 for ch in letters if unicodedata.name(ch, "").startswith("LATIN"))
    if latin / len(letters) < min_latin:
        return False
    tokens = tokenize(text)
    if not tokens:
        return False
    stop, easy = resources.stopwords(), resources.easy_words()
    known = sum(1 for t in tokens if t in stop or t in easy)
    return known / len(tokens) >= min_known


def _ends_with_abbreviation(chunk: str) -> bool:
    words = chunk.lower().split()
    if not words:
        return False
    for abbr in resources.abbreviations():
        n = abbr.count(" ") + 1
        if " ".join(words[-n:]) == abbr:
            return True
    return False


def split_sentences(text: str) -> list[str]:
    """Split at ``. ! ?`` followed by whitespace and an uppercase letter, or at end of text."""
    sentences = []
    start = 0
    n = len(text)
    for m in _TERMINAL_RE.finditer(text):
        end = m.end()
        j = end
        while j < n and text[j].isspace():
            j += 1
        if j == n:
            boundary = True
        elif j > end and text[j].isupper():
            boundary = not (m.group().startswith(".") and _ends_with_abbreviation(text[start:end]))
        else:
            boundary = False
        if boundary:
            sentence = text[start:end].strip()
            if sentence:
                sentences.append(sentence)
            start = end
    tail = text[start:].strip()
    if tail:
        sentences.append(tail)
    return sentences
