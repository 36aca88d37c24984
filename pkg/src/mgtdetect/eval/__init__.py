"""Cross-validation, metrics, the ablation experiment and report bundles."""

from .experiment import (ARMS, AblationResult, EvalReport, InvariantError, check_no_leakage, derive_seed,
                         run_ablation_experiment, run_experiment)
from .folds import FoldPlan, stratified_kfold
from .metrics import METRIC_NAMES, Metrics, compute_metrics, mean_metrics
from .report import ReportError, emit_reports

__all__ = [
    "ARMS", "AblationResult", "EvalReport", "InvariantError", "check_no_leakage", "derive_seed",
    "run_ablation_experiment", "run_experiment", "FoldPlan", "stratified_kfold", "METRIC_NAMES", "Metrics",
    "compute_metrics", "mean_metrics", "ReportError", "emit_reports",
]
