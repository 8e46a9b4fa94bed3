"""Full analysis pipeline and rendering of the report tables."""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

from . import inference, stats
from .dataio import ModelAggregate, aggregate_by_model
from .errors import IncompleteInputs, SingleModel, ValidationError
from .figures import emit_figures
from .scoring import CoefficientSet, Observation, ScoreRecord, canonical_order, score_dataset
from .sensitivity import (
    PAPER_LEVELS,
    SELECTED_SETTINGS,
    MonotonicityViolation,
    RankingStability,
    SensitivityCell,
    SensitivityGrid,
    check_monotonicity,
    evaluate_cell,
    evaluate_grid,
    ranking_stability,
)

TABLE_NAMES = (
    "table2_descriptive",
    "table3_paired",
    "table4_models",
    "table5_correlations",
    "table6_sensitivity",
    "table7_selected",
)

# (label, x attribute, y attribute)
DEFAULT_CORRELATIONS = (
    ("S vs E", "entropy", "reduced"),
    ("S vs E*", "entropy", "generalized"),
    ("D vs E*", "denominator", "generalized"),
    ("Delta vs S", "gain", "entropy"),
)

DESCRIPTIVE_VARIABLES = (
    ("U", "utility"),
    ("S", "entropy"),
    ("I_int", "integration"),
    ("C_a", "reflective"),
    ("D", "denominator"),
    ("E", "reduced"),
    ("E*", "generalized"),
    ("Delta", "gain"),
)


def record_value(rec: ScoreRecord, attr: str) -> float:
    if hasattr(rec.observation, attr):
        return getattr(rec.observation, attr)
    return getattr(rec, attr)


@dataclass
class Analysis:
    coeffs: CoefficientSet
    ci_level: float
    records: list[ScoreRecord]
    descriptives: list[tuple[str, stats.DescriptiveSummary]]
    paired: inference.PairedTestResult | None
    wilcoxon: inference.WilcoxonResult | None
    aggregates: list[ModelAggregate]
    correlations: list[tuple[str, inference.CorrelationResult | None]]
    grid: SensitivityGrid
    selected: list[SensitivityCell]
    violations: list[MonotonicityViolation]
    ranking: RankingStability | None
    notices: list[str] = field(default_factory=list)


def run_analysis(
    observations: Sequence[Observation],
    coeffs: CoefficientSet | None = None,
    levels: Sequence[float] = PAPER_LEVELS,
    ci_level: float = 0.95,
    correlation_pairs: Sequence[tuple[str, str, str]] = DEFAULT_CORRELATIONS,
) -> Analysis:
    coeffs = coeffs or CoefficientSet()
    ordered = canonical_order(observations)
    records = score_dataset(ordered, coeffs)
    notices: list[str] = []

    descriptives = [(label, stats.describe([record_value(r, attr) for r in records]))
                    for label, attr in DESCRIPTIVE_VARIABLES]

    generalized = [r.generalized for r in records]
    reduced = [r.reduced for r in records]
    try:
        paired = inference.paired_t_test(generalized, reduced, ci_level)
    except ValidationError as exc:
        paired = None
        notices.append(f"paired t-test not computed: {exc}")
    try:
        wilcoxon = inference.wilcoxon_signed_rank(generalized, reduced)
    except ValidationError as exc:
        wilcoxon = None
        notices.append(f"Wilcoxon test not computed: {exc}")

    correlations = []
    for label, x_attr, y_attr in correlation_pairs:
        try:
            result = inference.pearson_correlation([record_value(r, x_attr) for r in records],
                                                   [record_value(r, y_attr) for r in records])
        except ValidationError as exc:
            result = None
            notices.append(f"correlation {label} not computed: {exc}")
        correlations.append((label, result))

    grid = evaluate_grid(ordered, levels, coeffs.alpha, coeffs.beta)
    settings = list(SELECTED_SETTINGS)
    if (coeffs.gamma, coeffs.lambda_) not in settings:
        settings.append((coeffs.gamma, coeffs.lambda_))
    selected = [evaluate_cell(ordered, g, lam, coeffs.alpha, coeffs.beta) for g, lam in settings]

    try:
        ranking = ranking_stability(grid)
    except SingleModel:
        ranking = None
        notices.append("ranking stability skipped: dataset has a single model")

    return Analysis(
        coeffs=coeffs,
        ci_level=ci_level,
        records=records,
        descriptives=descriptives,
        paired=paired,
        wilcoxon=wilcoxon,
        aggregates=aggregate_by_model(records),
        correlations=correlations,
        grid=grid,
        selected=selected,
        violations=check_monotonicity(grid),
        ranking=ranking,
        notices=notices,
    )


def fmt_num(x: float | None, places: int = 4) -> str:
    if x is None or (isinstance(x, float) and math.isnan(x)):
        return "NA"
    text = format(x, f".{places}f")
    # no negative zero in rendered tables
    if text.startswith("-") and float(text) == 0.0:
        text = text[1:]
    return text


def fmt_p(p: float | None) -> str:
    if p is None:
        return "NA"
    if p < 1e-3:
        return format(p, ".2e")
    return format(p, "#.3g")


@dataclass(frozen=True)
class Table:
    name: str
    title: str
    header: tuple[str, ...]
    rows: tuple[tuple[str, ...], ...]
    notice: str | None = None

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        if self.notice:
            buf.write(f"# {self.notice}\n")
            return buf.getvalue()
        w.writerow(self.header)
        w.writerows(self.rows)
        return buf.getvalue()

    def to_text(self) -> str:
        lines = [self.title, "=" * len(self.title)]
        if self.notice:
            lines.append(self.notice)
            return "\n".join(lines) + "\n"
        widths = [max(len(self.header[k]), *(len(r[k]) for r in self.rows)) if self.rows else len(self.header[k])
                  for k in range(len(self.header))]
        def line(cells):
            return "  ".join(c.ljust(w) if k == 0 else c.rjust(w) for k, (c, w) in enumerate(zip(cells, widths))).rstrip()
        lines.append(line(self.header))
        lines.append("  ".join("-" * w for w in widths))
        lines.extend(line(r) for r in self.rows)
        return "\n".join(lines) + "\n"


def descriptive_table(a: Analysis) -> Table:
    n = a.descriptives[0][1].n
    rows = tuple(
        (label, fmt_num(s.mean), fmt_num(s.sd), fmt_num(s.min), fmt_num(s.median), fmt_num(s.max))
        for label, s in a.descriptives
    )
    return Table("table2_descriptive", f"Descriptive statistics (n = {n})",
                 ("Variable", "Mean", "SD", "Min", "Median", "Max"), rows)


def paired_table(a: Analysis) -> Table:
    level = f"{a.ci_level * 100:g}% CI"
    mean_e_star = stats.mean([r.generalized for r in a.records])
    mean_e = stats.mean([r.reduced for r in a.records])
    p = a.paired
    w = a.wilcoxon
    ci = f"[{fmt_num(p.ci_low)}, {fmt_num(p.ci_high)}]" if p else "NA"
    row = (
        "E* vs E",
        fmt_num(mean_e_star),
        fmt_num(mean_e),
        fmt_num(p.mean_diff if p else stats.mean([r.gain for r in a.records])),
        ci,
        fmt_num(p.t_statistic) if p else "NA",
        str(p.df) if p else "NA",
        fmt_p(p.p_two_sided) if p else "NA",
        fmt_num(w.z_statistic) if w else "NA",
        fmt_p(w.p_two_sided) if w else "NA",
    )
    return Table("table3_paired", "Paired comparison of E* and E",
                 ("Comparison", "Mean E*", "Mean E", "Mean Delta", level, "t", "df", "t-test p",
                  "Wilcoxon z", "Wilcoxon p"), (row,))


def model_table(a: Analysis) -> Table:
    rows = tuple(
        (m.model_id, str(m.n), fmt_num(m.utility), fmt_num(m.entropy), fmt_num(m.integration),
         fmt_num(m.reflective), fmt_num(m.denominator), fmt_num(m.reduced), fmt_num(m.generalized),
         fmt_num(m.gain), fmt_num(m.gain_sd))
        for m in a.aggregates
    )
    return Table("table4_models", "Mean scores by model",
                 ("Model", "n", "U", "S", "I_int", "C_a", "D", "E", "E*", "Delta", "SD Delta"), rows)


def correlation_table(a: Analysis) -> Table:
    title = "Selected correlations"
    header = ("Pair", "r", "p")
    if not a.correlations:
        return Table("table5_correlations", title, header, (), notice="correlation table omitted: no pairs selected")
    rows = []
    for label, res in a.correlations:
        if res is None:
            rows.append((label, "NA", "NA"))
        else:
            rows.append((label, fmt_num(res.r), fmt_p(res.p_two_sided)))
    return Table("table5_correlations", title, header, tuple(rows))


def sensitivity_table(a: Analysis) -> Table:
    levels = a.grid.grid_values
    header = ("gamma\\lambda", *(fmt_num(v, 2) for v in levels))
    rows = tuple(
        (fmt_num(g, 2), *(fmt_num(c.mean_gain) for c in row))
        for g, row in zip(levels, a.grid.cells)
    )
    return Table("table6_sensitivity", "Mean stability gain over (gamma, lambda)", header, rows)


def selected_table(a: Analysis) -> Table:
    rows = tuple(
        (fmt_num(c.gamma, 2), fmt_num(c.lambda_, 2), fmt_num(c.min_gain), fmt_num(c.proportion_positive, 2))
        for c in a.selected
    )
    return Table("table7_selected", "Minimum gain and proportion with E* > E",
                 ("gamma", "lambda", "Min Delta", "Proportion E* > E"), rows)


def render_tables(a: Analysis | None) -> list[Table]:
    if a is None or not a.records:
        raise IncompleteInputs("analysis results are required to render tables")
    return [descriptive_table(a), paired_table(a), model_table(a), correlation_table(a),
            sensitivity_table(a), selected_table(a)]


def summary_text(a: Analysis) -> str:
    lines = ["Report summary", "==============",
             f"observations: {len(a.records)}",
             f"models: {len(a.aggregates)}",
             f"coefficients: alpha={a.coeffs.alpha:g} beta={a.coeffs.beta:g} "
             f"gamma={a.coeffs.gamma:g} lambda={a.coeffs.lambda_:g}",
             f"all gains positive: {all(r.gain > 0 for r in a.records)}"]
    if a.violations:
        lines.append(f"monotonicity violations: {len(a.violations)}")
        for v in a.violations:
            lines.append(f"  along {v.axis}: {v.before} -> {v.after} drops by {v.drop:.3e}")
    else:
        lines.append("monotonicity: mean gain nondecreasing along both axes")
    if a.ranking is not None:
        if a.ranking.stable:
            lines.append("ranking stable across grid: " + " > ".join(a.ranking.ranking))
        else:
            lines.append(f"ranking varies across grid: {len(a.ranking.groups)} distinct orderings")
            for ranking, cells in a.ranking.groups.items():
                lines.append(f"  {' > '.join(ranking)}: {len(cells)} cells")
    for notice in a.notices:
        lines.append(f"notice: {notice}")
    return "\n".join(lines) + "\n"


def write_report(a: Analysis, out_dir: str | Path) -> list[Path]:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written = []
    for table in render_tables(a):
        for suffix, text in ((".csv", table.to_csv()), (".txt", table.to_text())):
            path = out / f"{table.name}{suffix}"
            path.write_text(text, encoding="utf-8", newline="")
            written.append(path)
    written += emit_figures(a.records, a.aggregates, out)
    path = out / "summary.txt"
    path.write_text(summary_text(a), encoding="utf-8", newline="")
    written.append(path)
    return written
