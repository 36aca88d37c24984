"""Report bundle: CSV/JSON data files for every table and figure, plus a manifest."""

from __future__ import annotations

import csv
import io
import json
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from ..models.base import ImportanceRanking
from ..stats import ComparisonTable
from .experiment import ARMS, AblationResult, EvalReport
from .metrics import METRIC_NAMES

MANIFEST = "manifest.json"
_BUNDLE_PATTERNS = ("metrics.csv", "metrics_mean.csv", "characterization.csv", "characterization.json",
                    "importance_*.csv", "embedding_2d.csv", "unique_words.csv", "ablation_*.csv", MANIFEST)


class ReportError(OSError):
    pass


def _csv(header: Sequence[str], rows: Iterable[Sequence]) -> tuple[str, int]:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    n = 0
    for row in rows:
        w.writerow(row)
        n += 1
    return buf.getvalue(), n


def _metric_rows(report: EvalReport, prefix: tuple = ()):
    for kind in report.kinds:
        for fold, m in enumerate(report.fold_metrics[kind]):
            yield (*prefix, kind, fold, *m.values(), int(m.precision_undefined))


def _mean_rows(report: EvalReport, prefix: tuple = ()):
    for kind in report.kinds:
        yield (*prefix, kind, *report.mean[kind].values())


def bundle_files(
    report: EvalReport | None = None,
    characterization: ComparisonTable | None = None,
    importances: Mapping[str, ImportanceRanking] | None = None,
    projection: Sequence[tuple[str, float, float, int]] | None = None,
    unique_words: Sequence[tuple[str, int, int, int]] | None = None,
) -> dict[str, tuple[str, int]]:
    """File name -> (content, data row count), without touching the filesystem."""
    files: dict[str, tuple[str, int]] = {}
    if report is not None:
        files["metrics.csv"] = _csv(("model", "fold", *METRIC_NAMES, "precision_undefined"), _metric_rows(report))
        files["metrics_mean.csv"] = _csv(("model", *METRIC_NAMES), _mean_rows(report))
        ab: AblationResult | None = report.ablation
        if ab is not None:
            files["ablation_metrics.csv"] = _csv(
                ("arm", "model", "fold", *METRIC_NAMES, "precision_undefined"),
                (r for arm in ARMS for r in _metric_rows(ab.arms[arm], (arm,))))
            deltas = ab.deltas()
            files["ablation_summary.csv"] = _csv(
                ("arm", "model", *METRIC_NAMES, "accuracy_delta_vs_A"),
                ((arm, kind, *ab.arms[arm].mean[kind].values(),
                  0.0 if arm == "A" else deltas[kind][f"{arm}-A"])
                 for arm in ARMS for kind in ab.arms[arm].kinds))
    if characterization is not None:
        content = characterization.to_csv()
        files["characterization.csv"] = (content, len(characterization.rows))
        files["characterization.json"] = (characterization.to_json(), len(characterization.rows))
    for kind, ranking in sorted((importances or {}).items()):
        files[f"importance_{kind}.csv"] = _csv(
            ("rank", "feature", "importance"),
            ((i + 1, name, value) for i, (name, value) in enumerate(ranking.items) if value > 0))
    if projection is not None:
        files["embedding_2d.csv"] = _csv(("doc_id", "x", "y", "label"), projection)
    if unique_words is not None:
        files["unique_words.csv"] = _csv(("doc_id", "label", "n_tokens", "n_unique"), unique_words)
    return files


def emit_reports(
    out_dir: str | Path,
    report: EvalReport | None = None,
    characterization: ComparisonTable | None = None,
    importances: Mapping[str, ImportanceRanking] | None = None,
    projection: Sequence[tuple[str, float, float, int]] | None = None,
    unique_words: Sequence[tuple[str, int, int, int]] | None = None,
    config: Mapping | None = None,
) -> dict:
    """Write the bundle into ``out_dir`` (replacing any earlier bundle) and return the manifest."""
    out = Path(out_dir)
    files = bundle_files(report, characterization, importances, projection, unique_words)
    has_ablation = report is not None and report.ablation is not None
    manifest = {
        "format_version": 1,
        "config": dict(config or {}),
        "ablation": "present" if has_ablation else "absent",
        "files": {name: {"rows": rows} for name, (_, rows) in sorted(files.items())},
    }
    try:
        out.mkdir(parents=True, exist_ok=True)
        for pattern in _BUNDLE_PATTERNS:
            for stale in out.glob(pattern):
                stale.unlink()
        for name, (content, _) in files.items():
            (out / name).write_text(content, encoding="utf-8")
        (out / MANIFEST).write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    except OSError as exc:
        raise ReportError(f"cannot write report bundle to {out}: {exc}") from exc
    return manifest
