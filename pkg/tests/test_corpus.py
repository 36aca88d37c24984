import json
import math
from collections import Counter

import pytest
from hypothesis import given
from hypothesis import strategies as st

from mgtdetect.corpus import (HUMAN, MACHINE, Corpus, CorpusError, Schema, coerce_label, concat_corpora,
                              corpus_stats, load_corpus, make_document, write_stats)


def test_load_tiny_csv(tiny_csv):
    c = load_corpus(tiny_csv)
    assert len(c) == 2
    assert c.stats.classes[HUMAN].vocab_size == 2
    assert c.stats.classes[MACHINE].vocab_size == 2
    assert c.documents[0].id == "a"


def test_empty_text_row_dropped(tmp_path):
    p = tmp_path / "c.csv"
    p.write_text("text,label\nhi there,0\n,1\ngo now,1\n", encoding="utf-8")
    c = load_corpus(p)
    assert len(c) == 2
    assert [d.reason for d in c.dropped] == ["missing text"]
    assert c.dropped[0].row == 3


def test_jsonl_and_schema(tmp_path):
    p = tmp_path / "c.jsonl"
    rows = [{"body": "the cat sat", "y": "machine"}, {"body": "the dog ran", "y": "human"}]
    p.write_text("\n".join(json.dumps(r) for r in rows) + "\n", encoding="utf-8")
    c = load_corpus(p, schema=Schema(text="body", label="y"))
    assert c.labels == [MACHINE, HUMAN]


def test_errors(tmp_path):
    p = tmp_path / "c.csv"
    p.write_text("text,kind\nhi,0\n", encoding="utf-8")
    with pytest.raises(CorpusError, match="label"):
        load_corpus(p)
    p.write_text("text,label\nhi there,7\n", encoding="utf-8")
    with pytest.raises(CorpusError, match=":2"):
        load_corpus(p)
    with pytest.raises(CorpusError):
        load_corpus(tmp_path / "missing.csv")


def test_non_english_dropped(tmp_path):
    p = tmp_path / "c.csv"
    p.write_text("text,label\nthe cat sat on the mat,0\nЭто русский текст без латиницы,1\n", encoding="utf-8")
    c = load_corpus(p)
    assert len(c) == 1 and c.dropped[0].reason == "non-English"


@pytest.mark.parametrize("value,expected", [(0, 0), (1, 1), ("1.0", 1), ("human", 0), ("Machine", 1), (True, 1)])
def test_coerce_label(value, expected):
    assert coerce_label(value) == expected


def test_stats_sample_sd():
    docs = [make_document("aa bb", HUMAN), make_document("aa bb cc dd", HUMAN)]
    s = corpus_stats(docs)
    assert s.classes[HUMAN].mean_tokens == 3.0
    assert s.classes[HUMAN].sd_tokens == pytest.approx(math.sqrt(2), abs=1e-12)
    assert s.classes[MACHINE] is None


def test_write_stats(tmp_path, tiny_csv):
    c = load_corpus(tiny_csv)
    write_stats(c.stats, tmp_path / "s.json", tmp_path / "s.csv")
    assert json.loads((tmp_path / "s.json").read_text())["total_n"] == 2
    assert (tmp_path / "s.csv").read_text().splitlines()[0] == "doc_id,label,n_tokens,n_unique"


def test_concat_prefixes_colliding_ids():
    a = Corpus.from_documents([make_document("the cat", HUMAN, id="0")])
    b = Corpus.from_documents([make_document("the dog", MACHINE, id="0")])
    merged = concat_corpora([a, b])
    assert [d.id for d in merged.documents] == ["0:0", "1:0"]


doc_texts = st.lists(st.sampled_from(["alpha", "beta", "gamma", "the", "of", "delta"]), min_size=1, max_size=12)


@given(st.lists(st.tuples(doc_texts, st.sampled_from([HUMAN, MACHINE])), min_size=1, max_size=12))
def test_corpus_invariants(rows):
    docs = [make_document(" ".join(words), label, id=str(i)) for i, (words, label) in enumerate(rows)]
    c = Corpus.from_documents(docs)
    n = sum(cs.n for cs in c.stats.classes.values() if cs is not None)
    assert n == c.stats.total_n == len(docs)
    for label in (HUMAN, MACHINE):
        assert c.class_vocab[label] == {t for d in docs if d.label == label for t in d.tokens}
    for d in docs:
        # tokens_nostop is a sub-multiset of tokens
        assert not Counter(d.tokens_nostop) - Counter(d.tokens)
