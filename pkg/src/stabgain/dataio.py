"""Reading and writing observation tables, and per-model aggregation."""

from __future__ import annotations

import csv
import io
import json
import os
from dataclasses import dataclass
from pathlib import Path
from typing import IO, Iterable, Sequence

from . import stats
from .errors import DuplicateKey, EmptyDataset, EmptyFile, MalformedRow, MissingColumn, ValidationError
from .scoring import DEFAULT_TOLERANCE, Observation, ScoreRecord, validate_observation

COLUMNS = ("model", "scenario", "utility", "entropy", "integration", "reflective")
FORMATS = ("csv", "json")


@dataclass(frozen=True)
class DatasetFile:
    header: tuple[str, ...]
    rows: tuple[Observation, ...]
    source_format: str


@dataclass(frozen=True)
class ModelAggregate:
    model_id: str
    n: int
    utility: float
    entropy: float
    integration: float
    reflective: float
    denominator: float
    reduced: float
    generalized: float
    gain: float
    gain_sd: float | None


def _row_to_observation(row: dict, line: int, tolerance: float) -> Observation:
    try:
        return validate_observation(
            {
                "model_id": row.get("model"),
                "scenario_id": row.get("scenario"),
                **{k: row.get(k) for k in COLUMNS[2:]},
            },
            tolerance,
        )
    except ValidationError as exc:
        raise MalformedRow(line, exc) from exc


def _check_header(header: Sequence[str]) -> tuple[str, ...]:
    names = tuple(h.strip() for h in header)
    for col in COLUMNS:
        if col not in names:
            raise MissingColumn(col)
    extra = [h for h in names if h not in COLUMNS]
    if extra or len(names) != len(COLUMNS):
        raise ValidationError(f"unexpected columns: {extra or list(names)}")
    return names


def _check_unique(rows: Iterable[Observation]) -> None:
    seen = set()
    for obs in rows:
        if obs.key in seen:
            raise DuplicateKey(f"duplicate (model, scenario): {obs.key}")
        seen.add(obs.key)


def _parse_csv(stream: IO[str], tolerance: float) -> DatasetFile:
    reader = csv.reader(stream)
    header = None
    for header in reader:
        if any(cell.strip() for cell in header):
            break
    else:
        raise EmptyFile("input is empty")
    names = _check_header(header)
    rows = []
    for record in reader:
        line = reader.line_num
        if not any(cell.strip() for cell in record):
            continue
        if len(record) != len(names):
            raise MalformedRow(line, ValidationError(f"expected {len(names)} fields, got {len(record)}"))
        rows.append(_row_to_observation(dict(zip(names, (c.strip() for c in record))), line, tolerance))
    if not rows:
        raise EmptyFile("input has a header but no data rows")
    return DatasetFile(names, tuple(rows), "csv")


def _parse_json(stream: IO[str], tolerance: float) -> DatasetFile:
    text = stream.read()
    if not text.strip():
        raise EmptyFile("input is empty")
    try:
        payload = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MalformedRow(exc.lineno, ValidationError(exc.msg)) from exc
    if isinstance(payload, dict):
        payload = payload.get("observations", [])
    if not isinstance(payload, list):
        raise ValidationError("JSON input must be a list of objects or {'observations': [...]}")
    if not payload:
        raise EmptyFile("input contains no observations")
    rows = []
    for idx, item in enumerate(payload, start=1):
        if not isinstance(item, dict):
            raise MalformedRow(idx, ValidationError("record is not an object"))
        _check_header(list(item))
        rows.append(_row_to_observation(item, idx, tolerance))
    return DatasetFile(COLUMNS, tuple(rows), "json")


def detect_format(path: str | os.PathLike | None, hint: str | None = None) -> str:
    if hint:
        if hint not in FORMATS:
            raise ValidationError(f"unknown format {hint!r}")
        return hint
    if path is not None and str(path).lower().endswith(".json"):
        return "json"
    return "csv"


def parse_dataset(source: str | os.PathLike | IO[str], format_hint: str | None = None,
                  tolerance: float = DEFAULT_TOLERANCE) -> DatasetFile:
    """Parse an observation table from a path or an open text stream.

    Row numbers in :class:`MalformedRow` are physical lines for CSV and
    1-based record indices for JSON.
    """
    if hasattr(source, "read"):
        fmt = detect_format(getattr(source, "name", None), format_hint)
        parsed = _parse_csv(source, tolerance) if fmt == "csv" else _parse_json(source, tolerance)
    else:
        fmt = detect_format(source, format_hint)
        with open(source, encoding="utf-8", newline="") as fh:
            parsed = _parse_csv(fh, tolerance) if fmt == "csv" else _parse_json(fh, tolerance)
    _check_unique(parsed.rows)
    return parsed


def _fmt_float(x: float) -> str:
    # repr round-trips exactly
    return repr(float(x))


def format_dataset(observations: Iterable[Observation], fmt: str = "csv") -> str:
    rows = list(observations)
    if fmt == "json":
        payload = [
            {"model": o.model_id, "scenario": o.scenario_id, "utility": o.utility, "entropy": o.entropy,
             "integration": o.integration, "reflective": o.reflective}
            for o in rows
        ]
        return json.dumps(payload, indent=2) + "\n"
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(COLUMNS)
    for o in rows:
        writer.writerow([o.model_id, o.scenario_id, *(_fmt_float(v) for v in (o.utility, o.entropy, o.integration, o.reflective))])
    return buf.getvalue()


def write_dataset(observations: Iterable[Observation], path: str | os.PathLike, fmt: str = "csv") -> None:
    Path(path).write_text(format_dataset(observations, fmt), encoding="utf-8", newline="")


SCORE_COLUMNS = (*COLUMNS, "B", "D", "E", "E*", "Delta")


def format_scores(records: Iterable[ScoreRecord], fmt: str = "csv") -> str:
    records = list(records)
    values = [
        (r.observation.model_id, r.observation.scenario_id, r.observation.utility, r.observation.entropy,
         r.observation.integration, r.observation.reflective, r.barrier, r.denominator, r.reduced,
         r.generalized, r.gain)
        for r in records
    ]
    if fmt == "json":
        return json.dumps([dict(zip(SCORE_COLUMNS, v)) for v in values], indent=2) + "\n"
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(SCORE_COLUMNS)
    for v in values:
        writer.writerow([v[0], v[1], *(_fmt_float(x) for x in v[2:])])
    return buf.getvalue()


def aggregate_by_model(records: Sequence[ScoreRecord]) -> list[ModelAggregate]:
    if not records:
        raise EmptyDataset("no score records")
    groups: dict[str, list[ScoreRecord]] = {}
    for rec in sorted(records, key=lambda r: r.observation.key):
        groups.setdefault(rec.observation.model_id, []).append(rec)
    out = []
    for model_id in sorted(groups):
        recs = groups[model_id]
        gains = [r.gain for r in recs]
        out.append(ModelAggregate(
            model_id=model_id,
            n=len(recs),
            utility=stats.mean([r.observation.utility for r in recs]),
            entropy=stats.mean([r.observation.entropy for r in recs]),
            integration=stats.mean([r.observation.integration for r in recs]),
            reflective=stats.mean([r.observation.reflective for r in recs]),
            denominator=stats.mean([r.denominator for r in recs]),
            reduced=stats.mean([r.reduced for r in recs]),
            generalized=stats.mean([r.generalized for r in recs]),
            gain=stats.mean(gains),
            gain_sd=stats.sample_sd(gains),
        ))
    return out
