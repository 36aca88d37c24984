"""Access to the word lists shipped in ``mgtdetect/data``."""

from __future__ import annotations

from functools import lru_cache
from pathlib import Path

DATA_VERSION = 1


def data_path(*parts: str) -> Path:
    return Path(__file__).parent.joinpath("data", *parts)


def lexicon_dir() -> Path:
    return data_path("lexicons")


def read_word_list(path: Path) -> list[str]:
    words = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if line and not line.startswith("#"):
                words.append(line.lower())
    return words


@lru_cache(maxsize=None)
def stopwords() -> frozenset[str]:
    return frozenset(read_word_list(data_path("stopwords.txt")))


@lru_cache(maxsize=None)
def easy_words() -> frozenset[str]:
    return frozenset(read_word_list(data_path("easy_words.txt")))


@lru_cache(maxsize=None)
def abbreviations() -> tuple[str, ...]:
    return tuple(read_word_list(data_path("abbreviations.txt")))


@lru_cache(maxsize=None)
def verb_stems() -> frozenset[str]:
    return frozenset(read_word_list(data_path("verb_stems.txt")))
