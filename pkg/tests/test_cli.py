import csv
import json

import pytest

from mgtdetect.cli import EXIT_INPUT, EXIT_MODEL, EXIT_OK, ConfigError, RunConfig, main
from mgtdetect.synthetic import detection_corpus

FAST_MODELS = "logreg,mnb,tree"


@pytest.fixture(scope="module")
def corpus_csv(tmp_path_factory):
    path = tmp_path_factory.mktemp("cli") / "corpus.csv"
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(["id", "text", "label"])
        for d in detection_corpus(60, seed=5).documents:
            w.writerow([d.id, d.text, d.label])
    return path


def run(*argv):
    return main([str(a) for a in argv])


def test_stats_and_characterize(corpus_csv, tmp_path):
    assert run("stats", corpus_csv, "--seed", 1, "--out", tmp_path) == EXIT_OK
    stats = json.loads((tmp_path / "stats.json").read_text())
    assert stats
    assert run("characterize", corpus_csv, "--seed", 1, "--out", tmp_path) == EXIT_OK
    assert (tmp_path / "characterization.csv").read_text().startswith("group,metric")


def test_evaluate_then_score(corpus_csv, tmp_path):
    code = run("evaluate", corpus_csv, "--seed", 3, "--out", tmp_path, "--models", FAST_MODELS, "--k", 3,
               "--save-models")
    assert code == EXIT_OK
    manifest = json.loads((tmp_path / "report" / "manifest.json").read_text())
    assert manifest["ablation"] == "absent" and "importance_tree.csv" in manifest["files"]
    for name, entry in manifest["files"].items():
        assert (tmp_path / "report" / name).exists()
    scores_dir = tmp_path / "scored"
    assert run("score", corpus_csv, "--seed", 3, "--out", scores_dir, "--model", tmp_path / "models" / "logreg.json") == 0
    rows = list(csv.DictReader(open(scores_dir / "scores.csv")))
    truth = {r["id"]: r["label"] for r in csv.DictReader(open(corpus_csv))}
    assert len(rows) == 60
    assert sum(r["label"] == truth[r["doc_id"]] for r in rows) >= 57


def test_score_rejects_bad_model_files(corpus_csv, tmp_path):
    junk = tmp_path / "junk.json"
    junk.write_text('{"format": "other"}')
    assert run("score", corpus_csv, "--seed", 0, "--out", tmp_path, "--model", junk) == EXIT_MODEL
    junk.write_text("not json")
    assert run("score", corpus_csv, "--seed", 0, "--out", tmp_path, "--model", junk) == EXIT_MODEL


def test_ablate_and_export(corpus_csv, tmp_path):
    assert run("ablate", corpus_csv, "--seed", 0, "--out", tmp_path) == EXIT_OK
    summary = json.loads((tmp_path / "ablation.json").read_text())
    assert summary["intersection_size"] == len(summary["intersection_vocab"]) > 0
    assert sum(1 for _ in open(tmp_path / "ablated.jsonl")) == 60
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"seed": 2, "word2vec": {"dimension": 8, "epochs": 1}}))
    assert run("export-embeddings", corpus_csv, "--config", cfg, "--out", tmp_path) == EXIT_OK
    assert (tmp_path / "embeddings.txt").read_text().startswith("mgtdetect-embeddings 1")
    assert sum(1 for _ in open(tmp_path / "embedding_2d.csv")) == 61


def test_input_errors(corpus_csv, tmp_path, capsys):
    assert run("stats", corpus_csv, "--out", tmp_path) == EXIT_INPUT
    assert "seed" in capsys.readouterr().err
    bad = tmp_path / "bad.csv"
    bad.write_text("id,body\n1,hello\n")
    assert run("stats", bad, "--seed", 0, "--out", tmp_path) == EXIT_INPUT
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"seed": 1, "colour": "red"}))
    assert run("stats", corpus_csv, "--config", cfg, "--out", tmp_path) == EXIT_INPUT
    empty = tmp_path / "lex"
    empty.mkdir()
    assert run("characterize", corpus_csv, "--seed", 0, "--out", tmp_path, "--lexicons", empty) == EXIT_INPUT
    assert run("evaluate", corpus_csv, "--seed", 0, "--out", tmp_path, "--models", "knn") == EXIT_INPUT


def test_single_class_evaluate_is_an_input_error(tmp_path):
    path = tmp_path / "one.csv"
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(["id", "text", "label"])
        for d in detection_corpus(20, seed=1).documents:
            if d.label == 0:
                w.writerow([d.id, d.text, 0])
    assert run("evaluate", path, "--seed", 0, "--out", tmp_path, "--models", "mnb") == EXIT_INPUT


def test_run_config_validation():
    with pytest.raises(ConfigError):
        RunConfig.from_dict({"inputs": []})
    with pytest.raises(ConfigError):
        RunConfig.from_dict({"seed": True})
    with pytest.raises(ConfigError):
        RunConfig.from_dict({"seed": 1, "schema": {"txt": "x"}})
    assert RunConfig.from_dict({"seed": 4}).k == 5
