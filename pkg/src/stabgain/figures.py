"""Self-contained SVG charts with CSV sidecars holding the plotted data."""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence
from xml.sax.saxutils import escape

from . import stats
from .dataio import ModelAggregate
from .errors import EmptyDataset
from .scoring import ScoreRecord

WIDTH, HEIGHT = 800, 600
MARGIN_LEFT, MARGIN_RIGHT, MARGIN_TOP, MARGIN_BOTTOM = 90, 30, 50, 70
PALETTE = ("#4c72b0", "#dd8452", "#55a868", "#c44e52", "#8172b3", "#937860", "#da8bc3", "#8c8c8c")

FIGURE_NAMES = ("fig1_gain_by_model", "fig2_entropy_vs_estar", "fig3_e_vs_estar", "fig4_distributions")


@dataclass(frozen=True)
class BoxStats:
    label: str
    n: int
    whisker_low: float
    q1: float
    median: float
    q3: float
    whisker_high: float
    outliers: tuple[float, ...]


def box_stats(label: str, values: Sequence[float]) -> BoxStats:
    """Quartiles by linear interpolation; whiskers reach the furthest point within 1.5 IQR."""
    xs = sorted(values)
    q1 = stats.quantile(xs, 0.25)
    q3 = stats.quantile(xs, 0.75)
    iqr = q3 - q1
    lo_fence, hi_fence = q1 - 1.5 * iqr, q3 + 1.5 * iqr
    inside = [x for x in xs if lo_fence <= x <= hi_fence]
    return BoxStats(
        label, len(xs), inside[0], q1, stats.median(xs), q3, inside[-1],
        tuple(x for x in xs if x < lo_fence or x > hi_fence),
    )


def _num(x: float) -> str:
    return f"{x:.2f}"


class _Axes:
    def __init__(self, x_range: tuple[float, float], y_range: tuple[float, float]):
        self.x0, self.x1 = _pad(*x_range)
        self.y0, self.y1 = _pad(*y_range)
        self.left, self.right = MARGIN_LEFT, WIDTH - MARGIN_RIGHT
        self.top, self.bottom = MARGIN_TOP, HEIGHT - MARGIN_BOTTOM

    def px(self, x: float) -> float:
        return self.left + (x - self.x0) / (self.x1 - self.x0) * (self.right - self.left)

    def py(self, y: float) -> float:
        return self.bottom - (y - self.y0) / (self.y1 - self.y0) * (self.bottom - self.top)


def _pad(lo: float, hi: float) -> tuple[float, float]:
    if hi <= lo:
        span = abs(lo) * 0.1 or 1.0
        return lo - span, hi + span
    span = hi - lo
    return lo - 0.05 * span, hi + 0.05 * span


def _ticks(lo: float, hi: float, count: int = 5) -> list[float]:
    return [lo + (hi - lo) * k / (count - 1) for k in range(count)]


def _frame(title: str, xlabel: str, ylabel: str, comment_rows: list[str]) -> list[str]:
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif">',
        "<!-- plot data",
        *[escape(r).replace("--", "- -") for r in comment_rows],
        "-->",
        f'<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
        f'<text x="{WIDTH / 2:.2f}" y="28" text-anchor="middle" font-size="18">{escape(title)}</text>',
        f'<text x="{WIDTH / 2:.2f}" y="{HEIGHT - 20}" text-anchor="middle" font-size="14">{escape(xlabel)}</text>',
        f'<text x="22" y="{HEIGHT / 2:.2f}" text-anchor="middle" font-size="14" '
        f'transform="rotate(-90 22 {HEIGHT / 2:.2f})">{escape(ylabel)}</text>',
    ]
    return parts


def _axis_lines(ax: _Axes, x_ticks: bool = True) -> list[str]:
    parts = [
        f'<line x1="{ax.left}" y1="{ax.bottom}" x2="{ax.right}" y2="{ax.bottom}" stroke="black"/>',
        f'<line x1="{ax.left}" y1="{ax.top}" x2="{ax.left}" y2="{ax.bottom}" stroke="black"/>',
    ]
    for y in _ticks(ax.y0, ax.y1):
        py = ax.py(y)
        parts.append(f'<line x1="{ax.left - 5}" y1="{_num(py)}" x2="{ax.left}" y2="{_num(py)}" stroke="black"/>')
        parts.append(f'<text x="{ax.left - 8}" y="{_num(py + 4)}" text-anchor="end" font-size="11">{y:.4f}</text>')
    if x_ticks:
        for x in _ticks(ax.x0, ax.x1):
            px = ax.px(x)
            parts.append(f'<line x1="{_num(px)}" y1="{ax.bottom}" x2="{_num(px)}" y2="{ax.bottom + 5}" stroke="black"/>')
            parts.append(f'<text x="{_num(px)}" y="{ax.bottom + 18}" text-anchor="middle" font-size="11">{x:.4f}</text>')
    return parts


def _csv(header: Sequence[str], rows: Sequence[Sequence[object]]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([repr(v) if isinstance(v, float) else v for v in row])
    return buf.getvalue()


def _model_colors(records: Sequence[ScoreRecord]) -> dict[str, str]:
    models = sorted({r.observation.model_id for r in records})
    return {m: PALETTE[k % len(PALETTE)] for k, m in enumerate(models)}


def _legend(colors: dict[str, str]) -> list[str]:
    parts = []
    for k, (model, color) in enumerate(colors.items()):
        y = MARGIN_TOP + 10 + 18 * k
        parts.append(f'<circle cx="{WIDTH - MARGIN_RIGHT - 150}" cy="{y}" r="5" fill="{color}"/>')
        parts.append(f'<text x="{WIDTH - MARGIN_RIGHT - 140}" y="{y + 4}" font-size="12">{escape(model)}</text>')
    return parts


def gain_by_model(aggregates: Sequence[ModelAggregate]) -> tuple[str, str]:
    header = ("model", "mean_gain", "sd_gain")
    rows = [(a.model_id, a.gain, a.gain_sd if a.gain_sd is not None else 0.0) for a in aggregates]
    top = max(m + s for _, m, s in rows)
    ax = _Axes((0.0, float(len(rows))), (0.0, top))
    ax.y0 = 0.0
    parts = _frame("Mean stability gain by model", "Model", "Mean gain (E* - E)", [",".join(header), *[
        f"{m},{g!r},{s!r}" for m, g, s in rows]])
    parts += _axis_lines(ax, x_ticks=False)
    slot = (ax.right - ax.left) / len(rows)
    for k, (model, g, s) in enumerate(rows):
        cx = ax.left + slot * (k + 0.5)
        w = slot * 0.6
        parts.append(f'<rect x="{_num(cx - w / 2)}" y="{_num(ax.py(g))}" width="{_num(w)}" '
                     f'height="{_num(ax.py(0.0) - ax.py(g))}" fill="{PALETTE[k % len(PALETTE)]}"/>')
        lo, hi = ax.py(max(g - s, 0.0)), ax.py(g + s)
        parts.append(f'<line x1="{_num(cx)}" y1="{_num(lo)}" x2="{_num(cx)}" y2="{_num(hi)}" stroke="black"/>')
        for yy in (lo, hi):
            parts.append(f'<line x1="{_num(cx - 8)}" y1="{_num(yy)}" x2="{_num(cx + 8)}" y2="{_num(yy)}" stroke="black"/>')
        parts.append(f'<text x="{_num(cx)}" y="{ax.bottom + 18}" text-anchor="middle" font-size="12">{escape(model)}</text>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n", _csv(header, rows)


def _scatter(records: Sequence[ScoreRecord], x_attr: str, y_attr: str, title: str, xlabel: str, ylabel: str,
             x_name: str, y_name: str, identity: bool) -> tuple[str, str]:
    def value(rec: ScoreRecord, attr: str) -> float:
        return getattr(rec.observation, attr) if hasattr(rec.observation, attr) else getattr(rec, attr)

    header = ("model", "scenario", x_name, y_name)
    rows = [(r.observation.model_id, r.observation.scenario_id, value(r, x_attr), value(r, y_attr)) for r in records]
    xs = [x for *_, x, _ in rows]
    ys = [y for *_, y in rows]
    if identity:
        lo, hi = min(xs + ys), max(xs + ys)
        ax = _Axes((lo, hi), (lo, hi))
    else:
        ax = _Axes((min(xs), max(xs)), (min(ys), max(ys)))
    parts = _frame(title, xlabel, ylabel, [",".join(header), *[f"{m},{s},{x!r},{y!r}" for m, s, x, y in rows]])
    parts += _axis_lines(ax)
    if identity:
        parts.append(f'<line x1="{_num(ax.px(ax.x0))}" y1="{_num(ax.py(ax.x0))}" x2="{_num(ax.px(ax.x1))}" '
                     f'y2="{_num(ax.py(ax.x1))}" stroke="gray" stroke-dasharray="6,4"/>')
    colors = _model_colors(records)
    for model, _, x, y in rows:
        parts.append(f'<circle cx="{_num(ax.px(x))}" cy="{_num(ax.py(y))}" r="4" fill="{colors[model]}" fill-opacity="0.8"/>')
    parts += _legend(colors)
    parts.append("</svg>")
    return "\n".join(parts) + "\n", _csv(header, rows)


def entropy_vs_generalized(records: Sequence[ScoreRecord]) -> tuple[str, str]:
    return _scatter(records, "entropy", "generalized", "Entropy vs generalized score",
                    "Entropy S", "Generalized score E*", "entropy", "generalized", identity=False)


def reduced_vs_generalized(records: Sequence[ScoreRecord]) -> tuple[str, str]:
    return _scatter(records, "reduced", "generalized", "Reduced vs generalized score",
                    "Reduced score E", "Generalized score E*", "reduced", "generalized", identity=True)


def distributions(records: Sequence[ScoreRecord]) -> tuple[str, str]:
    boxes = [
        box_stats("E", [r.reduced for r in records]),
        box_stats("E*", [r.generalized for r in records]),
    ]
    header = ("series", "n", "whisker_low", "q1", "median", "q3", "whisker_high", "outliers")
    rows = [(b.label, b.n, b.whisker_low, b.q1, b.median, b.q3, b.whisker_high,
             ";".join(repr(o) for o in b.outliers)) for b in boxes]
    lo = min(min(b.whisker_low, *b.outliers) if b.outliers else b.whisker_low for b in boxes)
    hi = max(max(b.whisker_high, *b.outliers) if b.outliers else b.whisker_high for b in boxes)
    ax = _Axes((0.0, 2.0), (lo, hi))
    parts = _frame("Distribution of reduced and generalized scores", "Score", "Value",
                   [",".join(header), *[",".join(repr(v) if isinstance(v, float) else str(v) for v in row) for row in rows]])
    parts += _axis_lines(ax, x_ticks=False)
    slot = (ax.right - ax.left) / len(boxes)
    for k, b in enumerate(boxes):
        cx = ax.left + slot * (k + 0.5)
        w = slot * 0.4
        color = PALETTE[k]
        parts.append(f'<line x1="{_num(cx)}" y1="{_num(ax.py(b.whisker_low))}" x2="{_num(cx)}" '
                     f'y2="{_num(ax.py(b.q1))}" stroke="black"/>')
        parts.append(f'<line x1="{_num(cx)}" y1="{_num(ax.py(b.q3))}" x2="{_num(cx)}" '
                     f'y2="{_num(ax.py(b.whisker_high))}" stroke="black"/>')
        for yv in (b.whisker_low, b.whisker_high):
            parts.append(f'<line x1="{_num(cx - w / 4)}" y1="{_num(ax.py(yv))}" x2="{_num(cx + w / 4)}" '
                         f'y2="{_num(ax.py(yv))}" stroke="black"/>')
        parts.append(f'<rect x="{_num(cx - w / 2)}" y="{_num(ax.py(b.q3))}" width="{_num(w)}" '
                     f'height="{_num(ax.py(b.q1) - ax.py(b.q3))}" fill="{color}" fill-opacity="0.6" stroke="black"/>')
        parts.append(f'<line x1="{_num(cx - w / 2)}" y1="{_num(ax.py(b.median))}" x2="{_num(cx + w / 2)}" '
                     f'y2="{_num(ax.py(b.median))}" stroke="black" stroke-width="2"/>')
        for o in b.outliers:
            parts.append(f'<circle cx="{_num(cx)}" cy="{_num(ax.py(o))}" r="3" fill="none" stroke="black"/>')
        parts.append(f'<text x="{_num(cx)}" y="{ax.bottom + 18}" text-anchor="middle" font-size="12">{escape(b.label)}</text>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n", _csv(header, rows)


def emit_figures(records: Sequence[ScoreRecord], aggregates: Sequence[ModelAggregate], out_dir: str | Path) -> list[Path]:
    """Write the four figures and their CSV sidecars; returns the written paths."""
    if not records or not aggregates:
        raise EmptyDataset("nothing to plot")
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    rendered = {
        "fig1_gain_by_model": gain_by_model(aggregates),
        "fig2_entropy_vs_estar": entropy_vs_generalized(records),
        "fig3_e_vs_estar": reduced_vs_generalized(records),
        "fig4_distributions": distributions(records),
    }
    written = []
    for name in FIGURE_NAMES:
        svg, sidecar = rendered[name]
        for suffix, text in ((".svg", svg), (".csv", sidecar)):
            path = out / f"{name}{suffix}"
            path.write_text(text, encoding="utf-8", newline="")
            written.append(path)
    return written
