"""Command-line entry point: stats, characterize, evaluate, ablate, score, export-embeddings.

Exit codes: 0 success, 2 input error, 3 model/compatibility error,
4 internal invariant violation.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import sys
from dataclasses import asdict, dataclass, field, fields, replace
from pathlib import Path

from .corpus import HUMAN, MACHINE, Corpus, CorpusError, Schema, concat_corpora, load_corpus, write_stats
from .eval import InvariantError, ReportError, emit_reports, run_ablation_experiment, run_experiment
from .eval.experiment import order_kinds
from .lexfeatures import LexiconError, LexiconSet, characterize, default_lexicons
from .models import IMPORTANCE_KINDS, KINDS, ModelCompatError, ModelError, TrainConfig, feature_importance, train
from .models import load_model, save_model
from .models.base import FingerprintMismatch
from .vectorize import (Featurizer, FeaturizerSpec, TfidfConfig, Word2VecConfig, doc_embeddings,
                        intersection_ablation, project_2d, train_word2vec)

EXIT_OK, EXIT_INPUT, EXIT_MODEL, EXIT_INVARIANT = 0, 2, 3, 4

log = logging.getLogger("mgtdetect")


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    """Resolved run configuration; echoed into every report manifest."""

    seed: int
    inputs: list[str] = field(default_factory=list)
    format: str | None = None
    schema: dict = field(default_factory=lambda: asdict(Schema()))
    english_only: bool = True
    lexicon_dir: str | None = None
    out: str = "out"
    models: list[str] = field(default_factory=lambda: list(KINDS))
    k: int = 5
    drop_stopwords: bool = True
    ngram_max: int = 1
    min_df: int = 2
    max_features: int | None = None
    style: bool = False
    embeddings: bool = False
    word2vec: dict = field(default_factory=dict)
    ablation: bool = False
    merge_per_source: int | None = None
    class_weight: str | None = None
    threads: int = 1
    save_models: bool = False

    @classmethod
    def from_dict(cls, d: dict) -> "RunConfig":
        known = {f.name for f in fields(cls)}
        unknown = sorted(set(d) - known)
        if unknown:
            raise ConfigError(f"unknown config keys: {', '.join(unknown)}")
        if d.get("seed") is None:
            raise ConfigError("a seed is required (config key 'seed' or --seed)")
        if not isinstance(d["seed"], int) or isinstance(d["seed"], bool):
            raise ConfigError("seed must be an integer")
        cfg = cls(**d)
        unknown_schema = sorted(set(cfg.schema) - {f.name for f in fields(Schema)})
        if unknown_schema:
            raise ConfigError(f"unknown schema keys: {', '.join(unknown_schema)}")
        try:
            Word2VecConfig(**cfg.word2vec)
        except TypeError as exc:
            raise ConfigError(f"bad word2vec config: {exc}") from None
        return cfg

    def word2vec_config(self) -> Word2VecConfig:
        return Word2VecConfig(**{"seed": self.seed, **self.word2vec})

    def featurizer_spec(self) -> FeaturizerSpec:
        tfidf = TfidfConfig(min_df=self.min_df, max_features=self.max_features, ngram_max=self.ngram_max,
                            drop_stopwords=self.drop_stopwords)
        return FeaturizerSpec(tfidf=tfidf, style=self.style,
                              embeddings=self.word2vec_config() if self.embeddings else None)

    def train_config(self) -> TrainConfig:
        return TrainConfig(seed=self.seed, class_weight=self.class_weight, threads=self.threads)


def resolve_config(args: argparse.Namespace) -> RunConfig:
    d: dict = {}
    if args.config:
        try:
            d = json.loads(Path(args.config).read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {args.config}: {exc}") from None
        if not isinstance(d, dict):
            raise ConfigError("config file must hold a JSON object")
    overrides = {
        "seed": args.seed,
        "out": args.out,
        "threads": args.threads,
        "inputs": args.inputs or None,
        "format": getattr(args, "format", None),
        "models": args.models.split(",") if getattr(args, "models", None) else None,
        "k": getattr(args, "k", None),
        "lexicon_dir": getattr(args, "lexicons", None),
        "ablation": True if getattr(args, "ablation", False) else None,
        "save_models": True if getattr(args, "save_models", False) else None,
    }
    d.update({key: value for key, value in overrides.items() if value is not None})
    return RunConfig.from_dict(d)


def load_inputs(cfg: RunConfig, require_label: bool = True) -> Corpus:
    if not cfg.inputs:
        raise ConfigError("no input corpus given")
    schema = Schema(**cfg.schema)
    corpora = [load_corpus(p, cfg.format, schema, cfg.english_only, require_label) for p in cfg.inputs]
    for c in corpora:
        for d in c.dropped:
            log.debug("dropped row %d: %s", d.row, d.reason)
    corpus = corpora[0] if len(corpora) == 1 and cfg.merge_per_source is None else \
        concat_corpora(corpora, cfg.merge_per_source, cfg.seed)
    if require_label and not len(corpus):
        dropped = sum(len(c.dropped) for c in corpora)
        raise CorpusError(f"no usable documents in input ({dropped} rows dropped)")
    return corpus


def _lexicons(cfg: RunConfig) -> LexiconSet:
    return LexiconSet.from_dir(cfg.lexicon_dir) if cfg.lexicon_dir else default_lexicons()


def _warn_single_class(corpus: Corpus) -> None:
    if not corpus.has_both_classes():
        print("warning: corpus contains a single class", file=sys.stderr)


def _out(cfg: RunConfig) -> Path:
    out = Path(cfg.out)
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise ReportError(f"cannot create output directory {out}: {exc}") from exc
    return out


def cmd_stats(cfg: RunConfig) -> int:
    corpus = load_inputs(cfg)
    _warn_single_class(corpus)
    out = _out(cfg)
    write_stats(corpus.stats, out / "stats.json", out / "stats.csv")
    print(f"{len(corpus)} documents ({len(corpus.dropped)} dropped); stats written to {out}")
    return EXIT_OK


def cmd_characterize(cfg: RunConfig) -> int:
    corpus = load_inputs(cfg)
    _warn_single_class(corpus)
    table = characterize(corpus, _lexicons(cfg))
    out = _out(cfg)
    (out / "characterization.csv").write_text(table.to_csv(), encoding="utf-8")
    (out / "characterization.json").write_text(table.to_json(), encoding="utf-8")
    print(f"{len(table.rows)} metrics written to {out}")
    return EXIT_OK


def _projection_rows(corpus: Corpus, cfg: RunConfig):
    try:
        table = train_word2vec(corpus, cfg.word2vec_config())
        proj = project_2d(doc_embeddings(table, corpus))
    except ValueError as exc:
        log.warning("no 2-D embedding projection: %s", exc)
        return None
    return [(d.id, float(x), float(y), d.label) for d, (x, y) in zip(corpus.documents, proj.points)]


def cmd_evaluate(cfg: RunConfig) -> int:
    corpus = load_inputs(cfg)
    if not corpus.has_both_classes():
        raise CorpusError("evaluation needs documents of both classes")
    kinds = order_kinds(cfg.models)
    spec = cfg.featurizer_spec()
    train_config = cfg.train_config()
    report = run_experiment(corpus, spec, kinds, cfg.k, cfg.seed, train_config)
    if cfg.ablation:
        ablation = run_ablation_experiment(corpus, kinds, cfg.k, cfg.seed, train_config,
                                           token_spec=FeaturizerSpec(tfidf=spec.tfidf),
                                           augmented_spec=FeaturizerSpec(tfidf=spec.tfidf, style=True,
                                                                         embeddings=cfg.word2vec_config()))
        report = replace(report, ablation=ablation)

    # full-corpus models for importance rankings and optional persistence
    featurizer = Featurizer.fit(spec, corpus.documents)
    X = featurizer.transform(corpus.documents, corpus.labels)
    importances = {}
    models_dir = Path(cfg.out) / "models"
    trained = {}
    for kind in kinds:
        if kind not in IMPORTANCE_KINDS and not cfg.save_models:
            continue
        model = train(kind, X, train_config, members=trained)
        trained[kind] = model
        if kind in IMPORTANCE_KINDS:
            importances[kind] = feature_importance(model)
        if cfg.save_models:
            models_dir.mkdir(parents=True, exist_ok=True)
            save_model(model, models_dir / f"{kind}.json", featurizer.to_dict())

    characterization = characterize(corpus, _lexicons(cfg))
    manifest = emit_reports(Path(cfg.out) / "report", report, characterization, importances,
                            _projection_rows(corpus, cfg), list(corpus.stats.per_document), asdict(cfg))
    for kind in report.kinds:
        m = report.mean[kind]
        print(f"{kind:12s} acc={m.accuracy:.4f} p={m.precision:.4f} r={m.recall:.4f} f1={m.f1:.4f}")
    print(f"{len(manifest['files'])} report files written to {Path(cfg.out) / 'report'}")
    return EXIT_OK


def _write_jsonl(path: Path, corpus: Corpus) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for d in corpus.documents:
            rec = {"id": d.id, "text": d.text, "label": d.label, "source": d.source}
            fh.write(json.dumps(rec, ensure_ascii=False, sort_keys=True) + "\n")


def cmd_ablate(cfg: RunConfig) -> int:
    corpus = load_inputs(cfg)
    ablated, amap = intersection_ablation(corpus)
    out = _out(cfg)
    _write_jsonl(out / "ablated.jsonl", ablated)
    summary = {"intersection_size": len(amap.intersection_vocab),
               "replaced_count": {"human": amap.replaced_count[HUMAN], "machine": amap.replaced_count[MACHINE]},
               "intersection_vocab": sorted(amap.intersection_vocab)}
    (out / "ablation.json").write_text(json.dumps(summary, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    print(f"ablated {len(ablated)} documents; shared vocabulary {len(amap.intersection_vocab)} types")
    return EXIT_OK


def cmd_score(cfg: RunConfig, model_path: str) -> int:
    model, featurizer_payload = load_model(model_path)
    if featurizer_payload is None:
        raise ModelCompatError(f"{model_path} does not embed a featurizer")
    featurizer = Featurizer.from_dict(featurizer_payload)
    if featurizer.names != model.feature_names:
        raise FingerprintMismatch("embedded featurizer does not produce the model's features")
    corpus = load_inputs(cfg, require_label=False)
    out = _out(cfg)
    with open(out / "scores.csv", "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["doc_id", "label", "score"])
        if len(corpus):
            X = featurizer.transform(corpus.documents)
            labels = model.predict(X)
            try:
                scores = model.predict_proba(X)
            except ModelError:
                scores = labels.astype(float)
            for d, label, score in zip(corpus.documents, labels, scores):
                w.writerow([d.id, int(label), float(score)])
    print(f"scored {len(corpus)} documents into {out / 'scores.csv'}")
    return EXIT_OK


def cmd_export_embeddings(cfg: RunConfig) -> int:
    corpus = load_inputs(cfg, require_label=False)
    table = train_word2vec(corpus, cfg.word2vec_config())
    out = _out(cfg)
    table.save(out / "embeddings.txt")
    rows = _projection_rows(corpus, cfg)
    if rows is not None:
        with open(out / "embedding_2d.csv", "w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["doc_id", "x", "y", "label"])
            w.writerows(rows)
    print(f"{len(table.vocab)} vectors of dimension {table.dimension} written to {out / 'embeddings.txt'}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, help="random seed (required here or in --config)")
    common.add_argument("--out", help="output directory")
    common.add_argument("--config", help="JSON run configuration; flags override its values")
    common.add_argument("--threads", type=int, help="worker threads for forest training")
    common.add_argument("--format", choices=("csv", "jsonl"), help="input format (default: by extension)")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="mgtdetect", description=__doc__.splitlines()[0], parents=[common])
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in (("stats", "per-class corpus statistics"),
                            ("characterize", "readability, bias, affect and moral metrics with Welch tests"),
                            ("evaluate", "cross-validated classifier evaluation and report bundle"),
                            ("ablate", "write the vocabulary-intersection ablated corpus"),
                            ("score", "apply a saved model to new documents"),
                            ("export-embeddings", "train and save word embeddings")):
        p = sub.add_parser(name, help=help_text, parents=[common])
        p.add_argument("inputs", nargs="*", help="corpus files (CSV or JSONL)")
        if name in ("characterize", "evaluate"):
            p.add_argument("--lexicons", help="lexicon directory (default: bundled lexicons)")
        if name == "evaluate":
            p.add_argument("--models", help=f"comma-separated subset of {','.join(KINDS)}")
            p.add_argument("--k", type=int, help="number of folds")
            p.add_argument("--ablation", action="store_true", help="also run the three-arm ablation experiment")
            p.add_argument("--save-models", action="store_true", help="save full-corpus models under OUT/models")
        if name == "score":
            p.add_argument("--model", required=True, help="model JSON written by evaluate --save-models")
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format="%(levelname)s: %(message)s")
    try:
        cfg = resolve_config(args)
        if args.command == "stats":
            return cmd_stats(cfg)
        if args.command == "characterize":
            return cmd_characterize(cfg)
        if args.command == "evaluate":
            return cmd_evaluate(cfg)
        if args.command == "ablate":
            return cmd_ablate(cfg)
        if args.command == "score":
            return cmd_score(cfg, args.model)
        return cmd_export_embeddings(cfg)
    except (ModelCompatError, FingerprintMismatch) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_MODEL
    except (InvariantError, AssertionError) as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    except (ConfigError, CorpusError, LexiconError, ReportError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
