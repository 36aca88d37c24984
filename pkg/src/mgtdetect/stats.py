"""Two-sample Welch test and the human-vs-machine comparison table."""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from scipy.special import betainc

ALPHA = 0.05


@dataclass(frozen=True)
class TestResult:
    t_statistic: float
    degrees_freedom: float
    p_value: float

    @property
    def significant_at_05(self) -> bool:
        return self.p_value < ALPHA


def _moments(xs: Sequence[float]) -> tuple[Fraction, Fraction]:
    """Exact mean and sample variance of float data."""
    fx = [Fraction(x) for x in xs]
    n = len(fx)
    total = sum(fx, Fraction(0))
    mean = total / n
    var = (sum((x * x for x in fx), Fraction(0)) - total * mean) / (n - 1)
    return mean, var


def student_t_sf2(t: float, df: float) -> float:
    """Two-sided tail probability P(|T| >= |t|) for Student's t."""
    if math.isinf(t):
        return 0.0
    return float(betainc(df / 2.0, 0.5, df / (df + t * t)))


def welch_t_test(a: Sequence[float], b: Sequence[float]) -> TestResult:
    """Welch's unequal-variance t-test, two-sided.

    Means and variances are accumulated in exact rational arithmetic, so the
    statistic is exactly antisymmetric under swapping the groups and exactly
    invariant under shifts that are themselves exact in floating point.
    Two constant groups give t = 0, p = 1 when equal and t = +/-inf, p = 0
    otherwise (df then falls back to n_a + n_b - 2).
    """
    na, nb = len(a), len(b)
    if na < 2 or nb < 2:
        raise ValueError("each group needs at least two observations")
    if any(not math.isfinite(x) for x in (*a, *b)):
        raise ValueError("non-finite observation")
    ma, va = _moments(a)
    mb, vb = _moments(b)
    sa, sb = va / na, vb / nb
    se2 = sa + sb
    if se2 == 0:
        pooled_df = float(na + nb - 2)
        if ma == mb:
            return TestResult(0.0, pooled_df, 1.0)
        return TestResult(math.copysign(math.inf, ma - mb), pooled_df, 0.0)
    diff = ma - mb
    t = math.copysign(math.sqrt(float(diff * diff / se2)), diff) if diff else 0.0
    df = float(se2 * se2 / (sa * sa / (na - 1) + sb * sb / (nb - 1)))
    return TestResult(t, df, student_t_sf2(t, df))


def mean_sd(values: Sequence[float]) -> tuple[float, float]:
    """Mean and sample SD; SD is NaN for fewer than two values."""
    n = len(values)
    if n == 0:
        return math.nan, math.nan
    mean = math.fsum(values) / n
    if n < 2:
        return mean, math.nan
    return mean, math.sqrt(math.fsum((v - mean) ** 2 for v in values) / (n - 1))


@dataclass(frozen=True)
class ComparisonRow:
    group: str
    metric: str
    human_mean: float
    human_sd: float
    machine_mean: float
    machine_sd: float
    test: TestResult | None = None

    @property
    def p_value(self) -> float | None:
        return None if self.test is None else self.test.p_value


@dataclass(frozen=True)
class ComparisonTable:
    """Per-class mean (SD) per metric with an optional Welch test per row."""

    rows: tuple[ComparisonRow, ...]
    n_human: int
    n_machine: int
    skipped: int = 0

    COLUMNS = ("group", "metric", "human_mean", "human_sd", "machine_mean", "machine_sd",
               "t_statistic", "df", "p_value", "significant")

    def row(self, metric: str) -> ComparisonRow:
        for r in self.rows:
            if r.metric == metric:
                return r
        raise KeyError(metric)

    def records(self) -> list[dict]:
        out = []
        for r in self.rows:
            rec = {
                "group": r.group,
                "metric": r.metric,
                "human_mean": _num(r.human_mean),
                "human_sd": _num(r.human_sd),
                "machine_mean": _num(r.machine_mean),
                "machine_sd": _num(r.machine_sd),
                "t_statistic": None if r.test is None else _num(r.test.t_statistic),
                "df": None if r.test is None else _num(r.test.degrees_freedom),
                "p_value": None if r.test is None else _num(r.test.p_value),
                "significant": None if r.test is None else r.test.significant_at_05,
            }
            out.append(rec)
        return out

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(self.COLUMNS)
        for rec in self.records():
            w.writerow(["" if rec[c] is None else rec[c] for c in self.COLUMNS])
        return buf.getvalue()

    def to_json(self) -> str:
        payload = {"n_human": self.n_human, "n_machine": self.n_machine, "skipped": self.skipped,
                   "rows": self.records()}
        return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def _num(x: float):
    if isinstance(x, float) and not math.isfinite(x):
        return None if math.isnan(x) else ("inf" if x > 0 else "-inf")
    return x


def compare(group: str, metrics: dict[str, tuple[list[float], list[float]]]) -> list[ComparisonRow]:
    """Build rows from ``{metric: (human_values, machine_values)}``."""
    rows = []
    for metric, (human, machine) in metrics.items():
        hm, hs = mean_sd(human)
        mm, ms = mean_sd(machine)
        test = welch_t_test(human, machine) if len(human) >= 2 and len(machine) >= 2 else None
        rows.append(ComparisonRow(group, metric, hm, hs, mm, ms, test))
    return rows
