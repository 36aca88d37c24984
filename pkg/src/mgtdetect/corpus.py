"""Labeled corpora: loading, cleaning, per-class statistics.

Label convention: 1 = machine-generated, 0 = human-written.
"""

from __future__ import annotations

import csv
import json
import logging
import math
import sys
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from .text import clean_text, is_english, split_sentences, tokenize
from . import resources

log = logging.getLogger(__name__)

HUMAN, MACHINE = 0, 1
LABELS = (HUMAN, MACHINE)

_LABEL_WORDS = {
    "0": HUMAN,
    "1": MACHINE,
    "0.0": HUMAN,
    "1.0": MACHINE,
    "human": HUMAN,
    "machine": MACHINE,
    "false": HUMAN,
    "true": MACHINE,
}


class CorpusError(ValueError):
    """Malformed or unreadable corpus input."""


@dataclass(frozen=True)
class Schema:
    """Maps corpus fields onto file columns."""

    text: str = "text"
    label: str = "label"
    id: str = "id"
    source: str = "source"


@dataclass(frozen=True)
class Document:
    id: str
    text: str
    label: int
    source: str | None = None


@dataclass(frozen=True)
class CleanDocument:
    id: str
    sentences: tuple[str, ...]
    tokens: tuple[str, ...]
    tokens_nostop: tuple[str, ...]
    label: int
    source: str | None = None

    @property
    def text(self) -> str:
        return " ".join(self.sentences)


@dataclass(frozen=True)
class DroppedRow:
    row: int
    reason: str


@dataclass(frozen=True)
class ClassStats:
    n: int
    mean_tokens: float
    sd_tokens: float
    vocab_size: int


@dataclass(frozen=True)
class CorpusStats:
    # None marks a class that is absent from the corpus
    classes: Mapping[int, ClassStats | None]
    total_n: int
    per_document: tuple[tuple[str, int, int, int], ...] = ()

    def to_dict(self) -> dict:
        out = {"total_n": self.total_n, "classes": {}}
        for label in LABELS:
            cs = self.classes.get(label)
            name = "machine" if label == MACHINE else "human"
            out["classes"][name] = None if cs is None else {
                "n": cs.n,
                "mean_tokens": cs.mean_tokens,
                "sd_tokens": cs.sd_tokens,
                "vocab_size": cs.vocab_size,
            }
        return out


@dataclass(frozen=True)
class Corpus:
    documents: tuple[CleanDocument, ...]
    class_vocab: Mapping[int, frozenset[str]]
    stats: CorpusStats
    dropped: tuple[DroppedRow, ...] = ()

    @classmethod
    def from_documents(cls, docs: Iterable[CleanDocument], dropped: Iterable[DroppedRow] = ()) -> "Corpus":
        docs = tuple(docs)
        vocab = {label: frozenset(t for d in docs if d.label == label for t in d.tokens) for label in LABELS}
        return cls(docs, vocab, corpus_stats(docs, vocab), tuple(dropped))

    def __len__(self) -> int:
        return len(self.documents)

    @property
    def labels(self) -> list[int]:
        return [d.label for d in self.documents]

    def has_both_classes(self) -> bool:
        return all(self.class_vocab[c] for c in LABELS) and len(set(self.labels)) == 2

    def subset(self, indices: Sequence[int]) -> "Corpus":
        return Corpus.from_documents(self.documents[i] for i in indices)


def make_document(text: str, label: int = HUMAN, id: str = "", source: str | None = None) -> CleanDocument:
    """Clean raw text and build its sentence/token views."""
    cleaned = clean_text(text)
    tokens = tokenize(cleaned)
    stop = resources.stopwords()
    return CleanDocument(
        id=id,
        sentences=tuple(split_sentences(cleaned)),
        tokens=tuple(tokens),
        tokens_nostop=tuple(t for t in tokens if t not in stop),
        label=label,
        source=source,
    )


def coerce_label(value) -> int:
    if isinstance(value, bool):
        return int(value)
    if isinstance(value, (int, float)) and value in (0, 1):
        return int(value)
    key = str(value).strip().lower()
    if key in _LABEL_WORDS:
        return _LABEL_WORDS[key]
    raise CorpusError(f"unknown label value {value!r}")


def _missing(value) -> bool:
    return value is None or (isinstance(value, str) and not value.strip()) or (
        isinstance(value, float) and math.isnan(value)
    )


def _read_rows(path: Path, fmt: str) -> tuple[list[str] | None, list[tuple[int, dict]]]:
    """Return (header or None, [(line number, row dict)])."""
    rows = []
    try:
        if fmt == "csv":
            csv.field_size_limit(min(sys.maxsize, 2**31 - 1))
            with open(path, newline="", encoding="utf-8") as fh:
                reader = csv.DictReader(fh)
                header = reader.fieldnames
                for row in reader:
                    rows.append((reader.line_num, row))
            return (list(header) if header else None), rows
        with open(path, encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, start=1):
                if not line.strip():
                    continue
                try:
                    obj = json.loads(line)
                except json.JSONDecodeError as exc:
                    raise CorpusError(f"{path}:{lineno}: invalid JSON ({exc.msg})") from None
                if not isinstance(obj, dict):
                    raise CorpusError(f"{path}:{lineno}: expected a JSON object")
                rows.append((lineno, obj))
        return None, rows
    except OSError as exc:
        raise CorpusError(f"cannot read {path}: {exc}") from None
    except UnicodeDecodeError as exc:
        raise CorpusError(f"cannot decode {path} as UTF-8: {exc}") from None


def infer_format(path: Path) -> str:
    suffix = Path(path).suffix.lower()
    if suffix in (".jsonl", ".ndjson", ".json"):
        return "jsonl"
    return "csv"


def load_corpus(
    path: str | Path,
    fmt: str | None = None,
    schema: Schema = Schema(),
    english_only: bool = True,
    require_label: bool = True,
) -> Corpus:
    """Read a CSV/JSONL corpus and clean every row.

    Rows with missing text or label, non-English rows (when ``english_only``)
    and rows that are empty after cleaning are dropped and recorded in
    ``Corpus.dropped``. Unlabeled rows are kept as label 0 when
    ``require_label`` is false (scoring input).
    """
    path = Path(path)
    fmt = fmt or infer_format(path)
    if fmt not in ("csv", "jsonl"):
        raise CorpusError(f"unsupported format {fmt!r}")
    header, rows = _read_rows(path, fmt)
    if header is not None:
        if schema.text not in header:
            raise CorpusError(f"{path}: text column {schema.text!r} absent")
        if require_label and schema.label not in header:
            raise CorpusError(f"{path}: label column {schema.label!r} absent")
    elif rows and all(schema.text not in r for _, r in rows):
        raise CorpusError(f"{path}: text column {schema.text!r} absent")

    docs, dropped = [], []
    for index, (lineno, row) in enumerate(rows):
        raw = row.get(schema.text)
        if _missing(raw):
            dropped.append(DroppedRow(lineno, "missing text"))
            continue
        label_value = row.get(schema.label)
        if _missing(label_value):
            if require_label:
                dropped.append(DroppedRow(lineno, "missing label"))
                continue
            label = HUMAN
        else:
            try:
                label = coerce_label(label_value)
            except CorpusError as exc:
                raise CorpusError(f"{path}:{lineno}: {exc}") from None
        raw = str(raw)
        if english_only and not is_english(clean_text(raw) or raw):
            dropped.append(DroppedRow(lineno, "non-English"))
            continue
        doc_id = row.get(schema.id)
        doc_id = str(index) if _missing(doc_id) else str(doc_id)
        source = row.get(schema.source)
        doc = make_document(raw, label, doc_id, None if _missing(source) else str(source))
        if not doc.tokens:
            dropped.append(DroppedRow(lineno, "empty after cleaning"))
            continue
        docs.append(doc)
    for d in dropped:
        log.info("dropped row %d: %s", d.row, d.reason)
    return Corpus.from_documents(docs, dropped)


def _sample_sd(values: Sequence[float]) -> float:
    n = len(values)
    if n < 2:
        return 0.0
    mean = math.fsum(values) / n
    return math.sqrt(math.fsum((v - mean) ** 2 for v in values) / (n - 1))


def corpus_stats(docs: Sequence[CleanDocument] | Corpus, class_vocab: Mapping[int, frozenset[str]] | None = None) -> CorpusStats:
    """Per-class token-count mean and sample SD, vocabulary sizes, per-document unique counts."""
    if isinstance(docs, Corpus):
        class_vocab = docs.class_vocab
        docs = docs.documents
    if class_vocab is None:
        class_vocab = {c: frozenset(t for d in docs if d.label == c for t in d.tokens) for c in LABELS}
    classes: dict[int, ClassStats | None] = {}
    for label in LABELS:
        lengths = [len(d.tokens) for d in docs if d.label == label]
        if not lengths:
            classes[label] = None
            continue
        classes[label] = ClassStats(
            n=len(lengths),
            mean_tokens=math.fsum(lengths) / len(lengths),
            sd_tokens=_sample_sd(lengths),
            vocab_size=len(class_vocab[label]),
        )
    per_doc = tuple((d.id, d.label, len(d.tokens), len(set(d.tokens))) for d in docs)
    return CorpusStats(classes, len(docs), per_doc)


def write_stats(stats: CorpusStats, json_path: Path, csv_path: Path) -> None:
    json_path.write_text(json.dumps(stats.to_dict(), indent=2, sort_keys=True) + "\n", encoding="utf-8")
    with open(csv_path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["doc_id", "label", "n_tokens", "n_unique"])
        w.writerows(stats.per_document)


def concat_corpora(corpora: Sequence[Corpus], per_source: int | None = None, seed: int = 0) -> Corpus:
    """Merge corpora, optionally sampling ``per_source`` documents uniformly from each.

    If document ids collide across inputs, every id is prefixed with its input's
    position (``"0:"``, ``"1:"``...).
    """
    import numpy as np

    rng = np.random.default_rng(seed)
    parts = []
    for corpus in corpora:
        chosen = corpus.documents
        if per_source is not None and len(chosen) > per_source:
            idx = np.sort(rng.choice(len(chosen), size=per_source, replace=False))
            chosen = [chosen[i] for i in idx]
        parts.append(list(chosen))
    ids = [d.id for part in parts for d in part]
    if len(set(ids)) != len(ids) and len(parts) > 1:
        parts = [[replace(d, id=f"{i}:{d.id}") for d in part] for i, part in enumerate(parts)]
    return Corpus.from_documents([d for part in parts for d in part])
