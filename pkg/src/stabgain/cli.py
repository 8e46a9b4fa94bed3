"""Command-line entry point: score, analyze, sweep, synth and report."""

from __future__ import annotations

import argparse
import hashlib
import json
import logging
import sys
from pathlib import Path

from . import __version__
from .dataio import FORMATS, format_dataset, format_scores, parse_dataset
from .errors import NonConvergence, ValidationError
from .report import render_tables, run_analysis, summary_text, write_report
from .scoring import CoefficientSet, score_dataset
from .sensitivity import PAPER_LEVELS
from .synth import generate_dataset, generic_spec, paper_spec

log = logging.getLogger("stabgain")

EXIT_OK, EXIT_IO, EXIT_VALIDATION, EXIT_NUMERIC = 0, 1, 2, 3


def _levels(text: str) -> list[float]:
    try:
        values = [float(v) for v in text.split(",") if v.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"invalid level list: {text!r}") from exc
    if not values:
        raise argparse.ArgumentTypeError("at least one level is required")
    return values


def _seed(text: str) -> int:
    value = int(text, 0)
    if not 0 <= value < 2**64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return value


def _sha256(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


def _config(args: argparse.Namespace) -> dict:
    keys = ("input", "alpha", "beta", "gamma", "lambda_", "levels", "ci", "seed", "preset", "models",
            "scenarios", "format")
    return {k.rstrip("_"): getattr(args, k) for k in keys if hasattr(args, k)}


def _write_manifest(path: Path, args: argparse.Namespace, outputs: list[Path], base: Path) -> None:
    manifest = {
        "tool": "stabgain",
        "version": __version__,
        "command": args.command,
        "config": _config(args),
        "input_sha256": _sha256(Path(args.input)) if getattr(args, "input", None) else None,
        "outputs": {str(p.relative_to(base)): _sha256(p) for p in sorted(outputs)},
    }
    path.write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n", encoding="utf-8")


def _coeffs(args: argparse.Namespace) -> CoefficientSet:
    return CoefficientSet(args.alpha, args.beta, args.gamma, args.lambda_)


def _load(args: argparse.Namespace):
    return list(parse_dataset(args.input).rows)


def cmd_score(args: argparse.Namespace) -> int:
    records = score_dataset(_load(args), _coeffs(args))
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(format_scores(records, args.format), encoding="utf-8", newline="")
    _write_manifest(out.with_name(out.name + ".manifest.json"), args, [out], out.parent)
    log.info("scored %d observations -> %s", len(records), out)
    return EXIT_OK


def _write_tables(args: argparse.Namespace, names: set[str]) -> int:
    analysis = run_analysis(_load(args), _coeffs(args), args.levels, args.ci)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    written = []
    for table in render_tables(analysis):
        if table.name not in names:
            continue
        for suffix, text in ((".csv", table.to_csv()), (".txt", table.to_text())):
            path = out / f"{table.name}{suffix}"
            path.write_text(text, encoding="utf-8", newline="")
            written.append(path)
    path = out / "summary.txt"
    path.write_text(summary_text(analysis), encoding="utf-8", newline="")
    written.append(path)
    _write_manifest(out / "manifest.json", args, written, out)
    return EXIT_OK


def cmd_analyze(args: argparse.Namespace) -> int:
    return _write_tables(args, {"table2_descriptive", "table3_paired", "table4_models", "table5_correlations"})


def cmd_sweep(args: argparse.Namespace) -> int:
    return _write_tables(args, {"table6_sensitivity", "table7_selected"})


def cmd_report(args: argparse.Namespace) -> int:
    analysis = run_analysis(_load(args), _coeffs(args), args.levels, args.ci)
    out = Path(args.out)
    written = write_report(analysis, out)
    _write_manifest(out / "manifest.json", args, written, out)
    for notice in analysis.notices:
        log.warning(notice)
    log.info("report written to %s", out)
    return EXIT_OK


def cmd_synth(args: argparse.Namespace) -> int:
    scenarios = 20 if args.scenarios is None else args.scenarios
    if args.preset == "paper" and args.models is None:
        spec = paper_spec(args.seed, scenarios)
    else:
        spec = generic_spec(args.models, scenarios, args.seed)
    rows = generate_dataset(spec)
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(format_dataset(rows, args.format), encoding="utf-8", newline="")
    _write_manifest(out.with_name(out.name + ".manifest.json"), args, [out], out.parent)
    log.info("wrote %d synthetic observations -> %s", len(rows), out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="stabgain", description=__doc__)
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def coefficient_flags(p):
        p.add_argument("--input", required=True, help="observation table (.csv or .json)")
        p.add_argument("--alpha", type=float, default=1.0)
        p.add_argument("--beta", type=float, default=1.0)
        p.add_argument("--gamma", type=float, default=0.5)
        p.add_argument("--lambda", dest="lambda_", type=float, default=0.5)

    def analysis_flags(p):
        p.add_argument("--levels", type=_levels, default=list(PAPER_LEVELS),
                       help="comma-separated coefficient grid levels")
        p.add_argument("--ci", type=float, default=0.95, help="confidence level for the paired CI")

    p = sub.add_parser("score", help="append B, D, E, E*, Delta to each observation")
    coefficient_flags(p)
    p.add_argument("--out", required=True, help="output file")
    p.add_argument("--format", choices=FORMATS, default="csv")
    p.set_defaults(func=cmd_score)

    for name, func, text in (
        ("analyze", cmd_analyze, "descriptives, paired tests, model means and correlations"),
        ("sweep", cmd_sweep, "coefficient sensitivity grid"),
        ("report", cmd_report, "all tables and figures"),
    ):
        p = sub.add_parser(name, help=text)
        coefficient_flags(p)
        analysis_flags(p)
        p.add_argument("--out", required=True, help="output directory")
        p.set_defaults(func=func)

    p = sub.add_parser("synth", help="generate a seeded synthetic dataset")
    p.add_argument("--preset", choices=("paper",), default="paper")
    p.add_argument("--models", type=int, default=None)
    p.add_argument("--scenarios", type=int, default=None)
    p.add_argument("--seed", type=_seed, default=42)
    p.add_argument("--out", required=True, help="output file")
    p.add_argument("--format", choices=FORMATS, default="csv")
    p.set_defaults(func=cmd_synth)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s", stream=sys.stderr)
    try:
        return args.func(args)
    except NonConvergence as exc:
        print(f"error: numerical routine did not converge: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
