import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from mgtdetect.corpus import HUMAN, MACHINE, Corpus, make_document
from mgtdetect.lexfeatures import (MORAL_CATEGORIES, FeatureOptions, LexiconError, LexiconSet, affect_features,
                                   bias_features, characterize, default_lexicons, load_lexicon, match_proportion,
                                   moral_features)
from mgtdetect.resources import lexicon_dir

FILLER = ["zorp", "blick", "quib", "frand", "vosk", "plimt", "drabe", "skon", "tweel"]


def write(tmp_path, name, content):
    p = tmp_path / name
    p.write_text(content, encoding="utf-8")
    return p


def test_load_plain(tmp_path):
    lex = load_lexicon(write(tmp_path, "h.txt", "Hedge\nmaybe\nmaybe\n"), "plain")
    assert lex.entries == {"hedge", "maybe"}


def test_load_wildcard_categories(tmp_path):
    lex = load_lexicon(write(tmp_path, "m.tsv", "harm*\tHarmVice\n# note\nsafe\tHarmVirtue\n"), "wildcard")
    assert lex.matches("harmful") and not lex.matches("har")
    assert lex.category("HarmVice").matches("harmless")
    assert not lex.category("HarmVirtue").matches("harmful")


def test_load_valenced(tmp_path):
    lex = load_lexicon(write(tmp_path, "v.tsv", "good\t0.7\n"), "valenced")
    assert lex.scores == {"good": 0.7}


@pytest.mark.parametrize("kind,content,msg", [
    ("valenced", "good\t1.5\n", "outside"),
    ("valenced", "good\n", ":1"),
    ("wildcard", "ha*rm\n", "terminal"),
    ("plain", "harm*\n", "terminal"),
    ("valenced", "ok\t0.1\nbad\tx\n", ":2"),
])
def test_load_errors(tmp_path, kind, content, msg):
    with pytest.raises(LexiconError, match=msg):
        load_lexicon(write(tmp_path, "x.txt", content), kind)


def test_match_proportion_examples(tmp_path):
    assert match_proportion(["a", "b", "a", "c"], load_lexicon(write(tmp_path, "a.txt", "a\n"), "plain")) == 0.5
    assert match_proportion(["harmful", "ok"], load_lexicon(write(tmp_path, "w.txt", "harm*\n"), "wildcard")) == 0.5
    with pytest.raises(ValueError, match="empty document"):
        match_proportion([], default_lexicons().valence)


def test_bias_examples():
    assert bias_features(" ".join(FILLER)) == bias_features(" ".join(FILLER[:3]))
    assert set(vars(bias_features(" ".join(FILLER))).values()) == {0.0}
    f = bias_features(" ".join(FILLER) + " maybe")
    assert f.hedges == 0.1
    assert f.bias_words == f.assertives == f.factives == f.implicatives == 0.0


def test_moral_examples():
    assert set(moral_features(" ".join(FILLER)).values()) == {0.0}
    words = (FILLER * 3)[:19] + ["kill"]
    m = moral_features(" ".join(words))
    assert m["HarmVice"] == 0.05
    assert sum(m.values()) == 0.05


def test_affect_examples():
    f = affect_features("zorp blick quib frand.")
    assert (f.vadneu, f.vadpos, f.vadneg) == (1.0, 0.0, 0.0)
    assert f.sneg == f.spos == f.sneu == 0.0
    f = affect_features("love zorp blick quib.")
    assert f.vadpos == pytest.approx(0.2, abs=1e-15)
    assert f.vadneg == 0.0 and f.vadneu == pytest.approx(0.8, abs=1e-15)
    assert f.wpos == 0.25 and f.spos == 1.0


def test_affect_sentence_classes():
    # sentence means: +0.8/2 = 0.4, -0.8/2 = -0.4, 0
    f = affect_features("Love zorp. Kill zorp. Zorp blick.")
    assert (f.spos, f.sneg, f.sneu) == (1 / 3, 1 / 3, 0.0)


# hand membership table for a small synthetic lexicon
HAND = {"maybe": 1, "suggests": 1, "suggest": 1, "sugar": 0, "cat": 0, "perhaps": 1, "per": 0}


@given(st.lists(st.sampled_from(sorted(HAND)), min_size=1, max_size=20))
def test_proportion_matches_hand_count(tmp_path_factory, tokens):
    path = tmp_path_factory.mktemp("lex") / "h.txt"
    path.write_text("maybe\nsuggest*\nperhaps\n", encoding="utf-8")
    lex = load_lexicon(path, "wildcard")
    assert match_proportion(tokens, lex) == sum(HAND[t] for t in tokens) / len(tokens)
    assert match_proportion(tokens[::-1], lex) == match_proportion(tokens, lex)


VALENCED = ["love", "kill", "terrible", "sad", "good", "zorp", "blick", "the", "of"]


@given(st.lists(st.lists(st.sampled_from(VALENCED), min_size=1, max_size=12), min_size=1, max_size=5))
def test_vad_sums_to_one(sentences):
    text = " ".join(" ".join(s) + "." for s in sentences)
    f = affect_features(text)
    assert abs(f.vadpos + f.vadneg + f.vadneu - 1.0) <= 1e-9
    assert f.spos + f.sneg + f.sneu <= 1.0 + 1e-12
    for v in vars(f).values():
        assert 0.0 <= v <= 1.0


@given(st.lists(st.sampled_from(VALENCED + ["maybe", "harmful", "innocent"]), min_size=1, max_size=15))
def test_self_concatenation_leaves_proportions(words):
    text = " ".join(words + ["zorp"]) + "."
    doubled = text + " " + text
    assert bias_features(text) == bias_features(doubled)
    assert moral_features(text) == moral_features(doubled)
    a, b = affect_features(text), affect_features(doubled)
    for name in ("pos", "neg", "wpos", "wneg", "wneu", "spos", "sneg", "sneu"):
        assert getattr(a, name) == getattr(b, name)
    assert math.isclose(a.vadpos, b.vadpos, abs_tol=1e-15)


def test_lexicon_set_from_missing_dir(tmp_path):
    with pytest.raises(LexiconError):
        LexiconSet.from_dir(tmp_path / "nope")
    with pytest.raises(LexiconError):
        LexiconSet.from_dir(tmp_path)
    assert set(LexiconSet.from_dir(lexicon_dir()).moral) == set(MORAL_CATEGORIES)


def test_characterize_mirrored_corpus():
    texts = ["I love this good day maybe.", "They kill the innocent and it is terrible.", "The study suggests a result."]
    docs = [make_document(t, lab, id=f"{lab}{i}") for lab in (HUMAN, MACHINE) for i, t in enumerate(texts)]
    table = characterize(Corpus.from_documents(docs))
    assert len(table.rows) == 5 + 5 + 11 + 11
    assert all(r.test.p_value == 1.0 and not r.test.significant_at_05 for r in table.rows)


def test_characterize_hedge_heavy_machine():
    human = [make_document(" ".join(FILLER[:i + 3] + FILLER[:5]) + ".", HUMAN, id=f"h{i}") for i in range(6)]
    machine = [make_document(" ".join(FILLER[:i + 3] + ["maybe", "perhaps", "possibly"]) + ".", MACHINE, id=f"m{i}")
               for i in range(6)]
    row = characterize(Corpus.from_documents(human + machine)).row("hedges")
    assert row.machine_mean > 10 * max(row.human_mean, 1e-3)
    assert row.test.significant_at_05


def test_feature_options_switch_streams():
    doc = make_document("the maybe")
    assert bias_features(doc).hedges == 1.0
    assert bias_features(doc, options=FeatureOptions(bias_drop_stopwords=False)).hedges == 0.5
