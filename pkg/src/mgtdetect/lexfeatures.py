"""Lexicon-based bias, affect and moral metrics, and the characterization report."""

from __future__ import annotations

import math
from dataclasses import dataclass, field, fields
from functools import lru_cache
from pathlib import Path
from typing import Mapping, Sequence

from . import resources
from .corpus import HUMAN, MACHINE, CleanDocument, Corpus, make_document
from .readability import readability_rows
from .stats import ComparisonTable, TestResult, compare, welch_t_test  # noqa: F401  (re-export)
from .text import tokenize

KINDS = ("plain", "wildcard", "valenced")

BIAS_LEXICONS = {
    "bias_words": "bias_words.txt",
    "assertives": "assertives.txt",
    "factives": "factives.txt",
    "hedges": "hedges.txt",
    "implicatives": "implicatives.txt",
}
MORAL_CATEGORIES = (
    "HarmVirtue", "HarmVice", "FairnessVirtue", "FairnessVice", "IngroupVirtue", "IngroupVice",
    "AuthorityVirtue", "AuthorityVice", "PurityVirtue", "PurityVice", "MoralityGeneral",
)
NEUTRAL_THRESHOLD = 0.1


class LexiconError(ValueError):
    pass


@dataclass(frozen=True)
class Lexicon:
    name: str
    kind: str
    entries: frozenset[str]
    scores: Mapping[str, float] = field(default_factory=dict)
    categories: Mapping[str, tuple[str, ...]] = field(default_factory=dict)

    def __post_init__(self):
        exact = frozenset(e for e in self.entries if not e.endswith("*"))
        prefixes = tuple(sorted(e[:-1] for e in self.entries if e.endswith("*")))
        object.__setattr__(self, "_exact", exact)
        object.__setattr__(self, "_prefixes", prefixes)

    def __len__(self) -> int:
        return len(self.entries)

    def matches(self, token: str) -> bool:
        if token in self._exact:
            return True
        return any(token.startswith(p) for p in self._prefixes)

    def category(self, name: str) -> "Lexicon":
        entries = frozenset(e for e, cats in self.categories.items() if name in cats)
        return Lexicon(name, self.kind, entries)

    def category_names(self) -> list[str]:
        seen = {}
        for cats in self.categories.values():
            for c in cats:
                seen.setdefault(c, None)
        return list(seen)


def _check_term(term: str, kind: str, where: str) -> None:
    if not term or any(ch.isspace() for ch in term):
        raise LexiconError(f"{where}: malformed entry {term!r}")
    if "*" in term[:-1] or (term.endswith("*") and kind != "wildcard") or term == "*":
        raise LexiconError(f"{where}: wildcard '*' only allowed in terminal position of wildcard entries")


def load_lexicon(path: str | Path, kind: str, name: str | None = None) -> Lexicon:
    """Read a lexicon file: one entry per line, ``#`` comments and blank lines ignored.

    ``wildcard`` files may carry tab-separated category names after the term;
    ``valenced`` files are ``term<TAB>score`` with score in [-1, 1].
    """
    if kind not in KINDS:
        raise LexiconError(f"unknown lexicon kind {kind!r}")
    path = Path(path)
    entries, scores, categories = set(), {}, {}
    try:
        fh = open(path, encoding="utf-8")
    except OSError as exc:
        raise LexiconError(f"cannot read {path}: {exc}") from None
    with fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            where = f"{path}:{lineno}"
            parts = [p.strip() for p in line.split("\t")]
            term = parts[0].lower()
            _check_term(term, kind, where)
            if kind == "valenced":
                if len(parts) != 2:
                    raise LexiconError(f"{where}: expected term<TAB>score")
                try:
                    score = float(parts[1])
                except ValueError:
                    raise LexiconError(f"{where}: score {parts[1]!r} is not a number") from None
                if not -1.0 <= score <= 1.0:
                    raise LexiconError(f"{where}: score {score} outside [-1, 1]")
                scores[term] = score
            elif kind == "plain" and len(parts) > 1:
                raise LexiconError(f"{where}: plain lexicons take one term per line")
            elif len(parts) > 1:
                cats = tuple(p for p in parts[1:] if p)
                categories[term] = tuple(dict.fromkeys(categories.get(term, ()) + cats))
            entries.add(term)
    return Lexicon(name or path.stem, kind, frozenset(entries), scores, categories)


def match_proportion(tokens: Sequence[str], lexicon: Lexicon) -> float:
    if not tokens:
        raise ValueError("empty document")
    return sum(1 for t in tokens if lexicon.matches(t)) / len(tokens)


@dataclass(frozen=True)
class LexiconSet:
    """Every lexicon the feature extractors need."""

    bias: Mapping[str, Lexicon]
    opinion_positive: Lexicon
    opinion_negative: Lexicon
    valence: Lexicon
    moral: Mapping[str, Lexicon]

    @classmethod
    def from_dir(cls, directory: str | Path) -> "LexiconSet":
        d = Path(directory)
        if not d.is_dir():
            raise LexiconError(f"lexicon directory {d} does not exist")
        bias = {name: load_lexicon(d / fname, "wildcard", name) for name, fname in BIAS_LEXICONS.items()}
        moral_all = load_lexicon(d / "moral_foundations.tsv", "wildcard", "moral")
        moral = {c: moral_all.category(c) for c in MORAL_CATEGORIES}
        return cls(
            bias=bias,
            opinion_positive=load_lexicon(d / "opinion_positive.txt", "wildcard", "pos"),
            opinion_negative=load_lexicon(d / "opinion_negative.txt", "wildcard", "neg"),
            valence=load_lexicon(d / "valence.tsv", "valenced", "valence"),
            moral=moral,
        )


@lru_cache(maxsize=None)
def default_lexicons() -> LexiconSet:
    return LexiconSet.from_dir(resources.lexicon_dir())


@dataclass(frozen=True)
class BiasFeatures:
    bias_words: float
    assertives: float
    factives: float
    hedges: float
    implicatives: float


@dataclass(frozen=True)
class AffectFeatures:
    pos: float
    neg: float
    vadneg: float
    vadneu: float
    vadpos: float
    wneg: float
    wpos: float
    wneu: float
    sneg: float
    spos: float
    sneu: float


MoralFeatures = dict  # category -> proportion, keys in MORAL_CATEGORIES order


@dataclass(frozen=True)
class FeatureOptions:
    """Which token stream each metric family reads."""

    bias_drop_stopwords: bool = True
    moral_drop_stopwords: bool = True
    affect_drop_stopwords: bool = False
    neutral_threshold: float = NEUTRAL_THRESHOLD


def _doc(doc: CleanDocument | str) -> CleanDocument:
    return make_document(doc) if isinstance(doc, str) else doc


def _tokens(doc: CleanDocument, drop_stopwords: bool) -> tuple[str, ...]:
    return doc.tokens_nostop if drop_stopwords else doc.tokens


def bias_features(doc, lexicons: LexiconSet | None = None, options: FeatureOptions = FeatureOptions()) -> BiasFeatures:
    lexicons = lexicons or default_lexicons()
    tokens = _tokens(_doc(doc), options.bias_drop_stopwords)
    return BiasFeatures(**{name: match_proportion(tokens, lex) for name, lex in lexicons.bias.items()})


def moral_features(doc, lexicons: LexiconSet | None = None, options: FeatureOptions = FeatureOptions()) -> dict[str, float]:
    lexicons = lexicons or default_lexicons()
    tokens = _tokens(_doc(doc), options.moral_drop_stopwords)
    return {c: match_proportion(tokens, lexicons.moral[c]) for c in MORAL_CATEGORIES}


def affect_features(doc, lexicons: LexiconSet | None = None, options: FeatureOptions = FeatureOptions()) -> AffectFeatures:
    """Opinion proportions plus token- and sentence-level valence aggregates.

    With per-token valence v (0 for unscored tokens) over N tokens:
    vadpos = sum(max(v, 0)) / N, vadneg = sum(max(-v, 0)) / N,
    vadneu = 1 - vadpos - vadneg. Word-level w* count scored tokens
    (v != 0) above, below and within the neutral threshold. Sentence-level
    s* classify each sentence by its mean token valence; sentences whose
    mean is exactly 0 are in none of the three.
    """
    lexicons = lexicons or default_lexicons()
    doc = _doc(doc)
    drop = options.affect_drop_stopwords
    tokens = _tokens(doc, drop)
    if not tokens or not doc.sentences:
        raise ValueError("degenerate document")
    theta = options.neutral_threshold
    scores = lexicons.valence.scores
    n = len(tokens)
    vals = [scores.get(t, 0.0) for t in tokens]
    vadpos = math.fsum(v for v in vals if v > 0) / n
    vadneg = math.fsum(-v for v in vals if v < 0) / n
    vadneu = 1.0 - vadpos - vadneg
    wpos = sum(1 for v in vals if v > theta) / n
    wneg = sum(1 for v in vals if v < -theta) / n
    wneu = sum(1 for v in vals if v != 0 and abs(v) <= theta) / n

    spos = sneg = sneu = 0
    for sentence in doc.sentences:
        st = tokenize(sentence, drop_stopwords=drop)
        if not st:
            continue
        s = math.fsum(scores.get(t, 0.0) for t in st) / len(st)
        if s > theta:
            spos += 1
        elif s < -theta:
            sneg += 1
        elif s != 0:
            sneu += 1
    ns = len(doc.sentences)
    return AffectFeatures(
        pos=match_proportion(tokens, lexicons.opinion_positive),
        neg=match_proportion(tokens, lexicons.opinion_negative),
        vadneg=vadneg,
        vadneu=vadneu,
        vadpos=vadpos,
        wneg=wneg,
        wpos=wpos,
        wneu=wneu,
        sneg=sneg / ns,
        spos=spos / ns,
        sneu=sneu / ns,
    )


def _field_names(cls) -> list[str]:
    return [f.name for f in fields(cls)]


def characterize(
    corpus: Corpus,
    lexicons: LexiconSet | None = None,
    options: FeatureOptions = FeatureOptions(),
    include_readability: bool = True,
) -> ComparisonTable:
    """Readability, bias, affect and moral metrics per class, each with a Welch test."""
    lexicons = lexicons or default_lexicons()
    rows = []
    skipped = 0
    if include_readability:
        values, skipped = readability_rows(corpus)
        rows += compare("readability", values)

    bias = {m: ([], []) for m in _field_names(BiasFeatures)}
    affect = {m: ([], []) for m in _field_names(AffectFeatures)}
    moral = {m: ([], []) for m in MORAL_CATEGORIES}
    for doc in corpus.documents:
        side = 1 if doc.label == MACHINE else 0
        # documents whose stopword-free stream is empty are skipped for that family
        if _tokens(doc, options.bias_drop_stopwords):
            for m, v in vars(bias_features(doc, lexicons, options)).items():
                bias[m][side].append(v)
        if _tokens(doc, options.affect_drop_stopwords) and doc.sentences:
            for m, v in vars(affect_features(doc, lexicons, options)).items():
                affect[m][side].append(v)
        if _tokens(doc, options.moral_drop_stopwords):
            for m, v in moral_features(doc, lexicons, options).items():
                moral[m][side].append(v)
    rows += compare("bias", bias) + compare("affect", affect) + compare("moral", moral)
    n_h = sum(1 for d in corpus.documents if d.label == HUMAN)
    return ComparisonTable(tuple(rows), n_h, len(corpus) - n_h, skipped)
