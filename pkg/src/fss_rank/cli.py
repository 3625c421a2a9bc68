"""Command-line interface: fss-rank <subcommand>.

Subcommands share the global flags (--corpus-dir, --out-dir, --window,
--seed, --config, --precision, --strict). A --config file holds
key=value lines whose entries override the corresponding flags. Exit
codes: 0 success, 1 validation error, 2 data inconsistency, 3 when
--strict escalates degenerate-statistics warnings.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .corpus import Window
from .credit import DEFAULT_WEIGHTS, load_weights_file
from .errors import (
    DataInconsistencyError,
    DegenerateStatisticsError,
    FssRankError,
    PipelineStageError,
    ValidationError,
)
from .pipeline import (
    MEDIAN_TEST_CHOICES,
    PRECISION_CHOICES,
    RunConfig,
    analyze,
    render_summary,
    run_pipeline,
    write_baselines,
    write_eligibility,
    write_fss,
    write_kde,
    write_rank_tables,
    write_scatter,
    write_shares,
    write_stats_tables,
)
from .ranking import MERGED, SEPARATE

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_INCONSISTENT = 2
EXIT_DEGENERATE = 3

#: Config-file keys that may override command-line flags.
_CONFIG_KEYS = {
    "corpus_dir": str,
    "out_dir": str,
    "window": str,
    "seed": int,
    "precision": str,
    "min_share": float,
    "min_per_gender": int,
    "weights_file": str,
    "override": str,
    "kde_bandwidth": float,
    "kde_grid": int,
    "median_test": str,
    "stratified": str,
}


def _build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--corpus-dir", default=".", help="directory with the five corpus CSVs")
    common.add_argument("--out-dir", default="out", help="directory for emitted files")
    common.add_argument("--window", default="2006:2010", help="observation window, A:B")
    common.add_argument("--seed", type=int, default=0, help="seed recorded for fixture sampling")
    common.add_argument("--config", default=None, help="key=value file overriding flags")
    common.add_argument("--precision", choices=PRECISION_CHOICES, default="6g")
    common.add_argument("--strict", action="store_true",
                        help="escalate degenerate-statistics warnings to exit code 3")
    common.add_argument("--min-share", type=float, default=0.5, dest="min_share",
                        help="minimum share of field members with >= 1 publication")
    common.add_argument("--min-per-gender", type=int, default=30, dest="min_per_gender",
                        help="minimum members of each gender per field")
    common.add_argument("--weights-file", default=None,
                        help="key=value file with byline credit weights")
    common.add_argument("--override", default=None,
                        help="baselines.csv overriding corpus-derived citation baselines")
    common.add_argument("--kde-bandwidth", type=float, default=None, dest="kde_bandwidth")
    common.add_argument("--kde-grid", type=int, default=512, dest="kde_grid")
    common.add_argument("--median-test", choices=MEDIAN_TEST_CHOICES, default="t",
                        dest="median_test")
    common.add_argument("--stratified", choices=(MERGED, SEPARATE), default=MERGED,
                        help="stratified ranking list: merged field list or per-gender lists")

    parser = argparse.ArgumentParser(
        prog="fss-rank",
        description="Productivity scoring and gender-stratified rank-shift analysis.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, description in (
        ("ingest", "load and validate the corpus; write eligibility and incidence reports"),
        ("shares", "write fractional authorship shares"),
        ("baselines", "write per-(year, category) citation baselines"),
        ("compute", "write per-researcher productivity scores"),
        ("rank", "write ranking lists, shifts, classes and scatter data"),
        ("stats", "write descriptive statistics, correlations and density curves"),
        ("report", "render the plain-text summary from emitted files"),
        ("run", "run the full pipeline and write the manifest"),
    ):
        sub.add_parser(name, parents=[common], help=description, description=description)
    return parser


def _apply_config_file(args: argparse.Namespace) -> None:
    """Apply key=value lines from --config on top of the parsed flags."""
    if args.config is None:
        return
    path = Path(args.config)
    if not path.is_file():
        raise ValidationError(f"missing config file: {path}")
    for lineno, line in enumerate(path.read_text(encoding="utf-8").splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        if "=" not in stripped:
            raise ValidationError(f"{path}:{lineno}: expected key=value, got {line!r}")
        key, _, raw = stripped.partition("=")
        key = key.strip().replace("-", "_")
        if key not in _CONFIG_KEYS:
            raise ValidationError(
                f"{path}:{lineno}: unknown key {key!r}, allowed: {sorted(_CONFIG_KEYS)}"
            )
        try:
            value = _CONFIG_KEYS[key](raw.strip())
        except ValueError:
            raise ValidationError(f"{path}:{lineno}: bad value for {key}: {raw.strip()!r}") from None
        setattr(args, key, value)


def _config_from_args(args: argparse.Namespace) -> RunConfig:
    weights = DEFAULT_WEIGHTS
    if args.weights_file is not None:
        weights = load_weights_file(args.weights_file)
    return RunConfig(
        corpus_dir=Path(args.corpus_dir),
        out_dir=Path(args.out_dir),
        window=Window.parse(args.window),
        min_productive_share=args.min_share,
        min_per_gender=args.min_per_gender,
        weights=weights,
        kde_grid=args.kde_grid,
        kde_bandwidth=args.kde_bandwidth,
        baselines_override=Path(args.override) if args.override else None,
        precision=args.precision,
        median_test=args.median_test,
        stratified=args.stratified,
        strict=args.strict,
        seed=args.seed,
    )


_STAGE_WRITERS = {
    "ingest": (write_eligibility,),
    "shares": (write_shares,),
    "baselines": (write_baselines,),
    "compute": (write_fss,),
    "rank": (write_rank_tables, write_scatter),
    "stats": (write_stats_tables, write_kde),
}


def _run_command(args: argparse.Namespace) -> int:
    config = _config_from_args(args)

    if args.command == "report":
        text = render_summary(config.out_dir)
        (config.out_dir / "summary.txt").write_text(text, encoding="utf-8")
        sys.stdout.write(text)
        return EXIT_OK

    if args.command == "run":
        results = analyze(config)
        manifest = run_pipeline(config, results=results)
        for line in results.warnings:
            print(f"warning: {line}", file=sys.stderr)
        print(f"pipeline complete: {len(manifest.row_counts)} files in {config.out_dir}")
        return EXIT_DEGENERATE if (config.strict and results.warnings) else EXIT_OK

    results = analyze(config)
    config.out_dir.mkdir(parents=True, exist_ok=True)
    counts: dict[str, int] = {}
    for writer in _STAGE_WRITERS[args.command]:
        counts.update(writer(results, config.out_dir, config.precision))
    if args.command == "ingest":
        for table, count in results.corpus.row_counts().items():
            print(f"{table}: {count}")
        print(f"eligible fields: {len(results.eligible)} of {len(results.corpus.fields)}")
    for name, count in counts.items():
        print(f"wrote {name} ({count} rows)")
    for line in results.warnings:
        print(f"warning: {line}", file=sys.stderr)
    return EXIT_DEGENERATE if (config.strict and results.warnings) else EXIT_OK


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        _apply_config_file(args)
        return _run_command(args)
    except PipelineStageError as exc:
        cause = exc.__cause__
        print(f"error: {exc}", file=sys.stderr)
        if isinstance(cause, DataInconsistencyError):
            return EXIT_INCONSISTENT
        if isinstance(cause, DegenerateStatisticsError):
            return EXIT_DEGENERATE
        return EXIT_VALIDATION
    except DataInconsistencyError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INCONSISTENT
    except DegenerateStatisticsError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DEGENERATE
    except (ValidationError, FssRankError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
