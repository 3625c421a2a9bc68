"""End-to-end orchestration: configuration, stages, CSV outputs, manifest.

The whole analysis is computed in memory by :func:`analyze` and written
by per-stage writer functions, so the ``run`` pipeline and the
individual CLI subcommands emit byte-identical files. All numeric CSV
cells use 6 significant digits (round-half-even) unless the precision
is set to ``full``.
"""

from __future__ import annotations

import csv
import datetime as _dt
import hashlib
import json
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping, Sequence

import numpy as np

from . import __version__
from .corpus import (
    CORPUS_FILES,
    Corpus,
    Gender,
    IncidenceRow,
    Window,
    filter_eligible_fields,
    gender_incidence_report,
    load_corpus,
)
from .credit import CreditWeights, DEFAULT_WEIGHTS, ShareVector, compute_all_shares, shares_table
from .errors import (
    DegenerateStatisticsError,
    PipelineStageError,
    ValidationError,
)
from .fss import FssScore, compute_all_fss
from .impact import CitationBaseline, baselines_table, compute_baselines, load_baselines_csv
from .ranking import (
    MERGED,
    RankEntry,
    RankShift,
    SEPARATE,
    ShiftSummaryRow,
    classify_field_shifts,
    distance_ratios,
    rank_shifts,
    shift_summary,
)
from .stats import (
    DescriptiveStats,
    PointBiserialResult,
    TestResult,
    descriptive_stats,
    epanechnikov_kde,
    mann_whitney_u,
    point_biserial,
    significance_stars,
    t_test_independent,
    z_test_proportions,
)

PRECISION_CHOICES = ("6g", "full")
MEDIAN_TEST_CHOICES = ("t", "mannwhitney")
SIGNIFICANCE_LEVEL = 0.05


@dataclass
class RunConfig:
    corpus_dir: Path
    out_dir: Path
    window: Window
    min_productive_share: float = 0.5
    min_per_gender: int = 30
    weights: CreditWeights = DEFAULT_WEIGHTS
    kde_grid: int = 512
    kde_bandwidth: float | None = None
    baselines_override: Path | None = None
    precision: str = "6g"
    median_test: str = "t"
    stratified: str = MERGED
    strict: bool = False
    seed: int = 0

    def __post_init__(self) -> None:
        self.corpus_dir = Path(self.corpus_dir)
        self.out_dir = Path(self.out_dir)
        if self.baselines_override is not None:
            self.baselines_override = Path(self.baselines_override)
        if not 0 <= self.min_productive_share <= 1:
            raise ValidationError(
                f"min_productive_share must be in [0,1], got {self.min_productive_share}"
            )
        if self.min_per_gender < 0:
            raise ValidationError(f"min_per_gender must be >= 0, got {self.min_per_gender}")
        if self.kde_grid < 2:
            raise ValidationError(f"kde_grid must be >= 2, got {self.kde_grid}")
        if self.kde_bandwidth is not None and self.kde_bandwidth <= 0:
            raise ValidationError(f"kde_bandwidth must be > 0, got {self.kde_bandwidth}")
        if self.precision not in PRECISION_CHOICES:
            raise ValidationError(f"precision must be one of {PRECISION_CHOICES}")
        if self.median_test not in MEDIAN_TEST_CHOICES:
            raise ValidationError(f"median_test must be one of {MEDIAN_TEST_CHOICES}")
        if self.stratified not in (MERGED, SEPARATE):
            raise ValidationError(f"stratified must be '{MERGED}' or '{SEPARATE}'")

    def snapshot(self) -> dict:
        """JSON-ready view of the configuration (for the manifest)."""
        return {
            "corpus_dir": str(self.corpus_dir),
            "out_dir": str(self.out_dir),
            "window": str(self.window),
            "min_productive_share": self.min_productive_share,
            "min_per_gender": self.min_per_gender,
            "weights": {
                "intramural_end": self.weights.intramural_end,
                "intramural_rest": self.weights.intramural_rest,
                "extramural_end": self.weights.extramural_end,
                "extramural_near_end": self.weights.extramural_near_end,
                "extramural_rest": self.weights.extramural_rest,
            },
            "kde_grid": self.kde_grid,
            "kde_bandwidth": self.kde_bandwidth,
            "baselines_override": (
                str(self.baselines_override) if self.baselines_override else None
            ),
            "precision": self.precision,
            "median_test": self.median_test,
            "stratified": self.stratified,
            "strict": self.strict,
            "seed": self.seed,
        }


@dataclass
class RunManifest:
    config: dict
    input_digests: dict[str, str]
    row_counts: dict[str, int]
    version: str
    timestamp: str

    def to_json(self) -> str:
        return json.dumps(
            {
                "config": self.config,
                "input_digests": self.input_digests,
                "row_counts": self.row_counts,
                "version": self.version,
                "timestamp": self.timestamp,
            },
            indent=2,
            sort_keys=False,
        ) + "\n"


@dataclass
class FieldStats:
    """One field's (or area's) Table-4-style row: per-gender stats plus tests."""

    group: str
    area: str
    stats_f: DescriptiveStats | None
    stats_m: DescriptiveStats | None
    unproductive_test: TestResult | None
    location_test: TestResult | None


@dataclass
class AnalysisResults:
    """Everything the writers need, computed once per run."""

    corpus: Corpus
    eligible: list[str]
    incidence: dict[str, list[IncidenceRow]]
    shares: dict[str, ShareVector]
    baselines: CitationBaseline
    scores: dict[str, list[FssScore]]
    entries: dict[str, list[RankEntry]]
    shifts: dict[str, list[RankShift]]
    classes: dict[str, dict[Gender, tuple[float, str]]]
    field_stats: list[FieldStats]
    area_stats: list[FieldStats]
    pbc_fields: dict[str, PointBiserialResult | None]
    shift_by_field: list[ShiftSummaryRow]
    shift_by_area: list[ShiftSummaryRow]
    kde_curves: dict[str, tuple[np.ndarray, np.ndarray]]
    warnings: list[str]

    def area_of(self, field_code: str) -> str:
        return self.corpus.fields[field_code].discipline_area


def _sha256(path: Path) -> str:
    return "sha256:" + hashlib.sha256(path.read_bytes()).hexdigest()


def _format_cell(value, precision: str) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        number = float(value)
        return repr(number) if precision == "full" else format(number, ".6g")
    if isinstance(value, Gender):
        return value.value
    return str(value)


def _write_csv(
    path: Path, header: Sequence[str], rows: Iterable[Sequence], precision: str
) -> int:
    count = 0
    with path.open("w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([_format_cell(cell, precision) for cell in row])
            count += 1
    return count


def _safe_name(label: str) -> str:
    return re.sub(r"[^A-Za-z0-9._-]", "_", label)


def _gender_battery(
    label: str,
    area: str,
    values_f: np.ndarray,
    values_m: np.ndarray,
    median_test: str,
    warnings: list[str],
) -> FieldStats:
    """Descriptive stats per gender plus the two pairwise tests (M vs F)."""
    stats_f = descriptive_stats(values_f) if len(values_f) else None
    stats_m = descriptive_stats(values_m) if len(values_m) else None
    unproductive = location = None
    if len(values_f) and len(values_m):
        try:
            unproductive = z_test_proportions(
                int((values_m == 0).sum()), len(values_m), int((values_f == 0).sum()), len(values_f)
            )
        except DegenerateStatisticsError as exc:
            warnings.append(f"{label}: unproductive z-test skipped: {exc}")
        try:
            if median_test == "t":
                location = t_test_independent(values_m, values_f)
            else:
                location = mann_whitney_u(values_m, values_f)
        except (DegenerateStatisticsError, ValidationError) as exc:
            warnings.append(f"{label}: location test skipped: {exc}")
    return FieldStats(label, area, stats_f, stats_m, unproductive, location)


def analyze(config: RunConfig) -> AnalysisResults:
    """Run the full computation; raises on validation/data errors."""
    corpus = load_corpus(config.corpus_dir, config.window)
    eligible = sorted(
        filter_eligible_fields(corpus, config.min_productive_share, config.min_per_gender)
    )
    incidence = {by: gender_incidence_report(corpus, by) for by in ("field", "area", "rank")}
    shares = compute_all_shares(corpus, config.weights)
    if config.baselines_override is not None:
        baselines = load_baselines_csv(config.baselines_override)
    else:
        baselines = compute_baselines(corpus)
    scores = compute_all_fss(corpus, shares, baselines, fields=eligible)

    warnings: list[str] = []
    entries: dict[str, list[RankEntry]] = {}
    shifts: dict[str, list[RankShift]] = {}
    classes: dict[str, dict[Gender, tuple[float, str]]] = {}
    for code in eligible:
        field_scores = scores.get(code, [])
        genders = [corpus.researchers[s.researcher_id].gender for s in field_scores]
        try:
            raw = distance_ratios(
                [s.value for s in field_scores],
                genders,
                researcher_ids=[s.researcher_id for s in field_scores],
                field_code=code,
            )
            ranked, field_shifts = rank_shifts(raw, config.stratified)
        except DegenerateStatisticsError as exc:
            warnings.append(f"field {code}: ranking skipped: {exc}")
            continue
        entries[code] = ranked
        shifts[code] = field_shifts
        classified = classify_field_shifts([s.shift for s in field_shifts], genders)
        classes[code] = {
            gender: (gs.mean_shift, gs.shift_class.value) for gender, gs in classified.items()
        }

    def _values(codes: Iterable[str], gender: Gender) -> np.ndarray:
        collected = [
            s.value
            for code in codes
            for s in scores.get(code, [])
            if corpus.researchers[s.researcher_id].gender is gender
        ]
        return np.asarray(collected, dtype=float)

    field_stats: list[FieldStats] = []
    pbc_fields: dict[str, PointBiserialResult | None] = {}
    for code in eligible:
        area = corpus.fields[code].discipline_area
        field_stats.append(
            _gender_battery(
                code, area, _values([code], Gender.F), _values([code], Gender.M),
                config.median_test, warnings,
            )
        )
        try:
            pbc_fields[code] = point_biserial(
                [s.value for s in scores.get(code, [])],
                [corpus.researchers[s.researcher_id].gender for s in scores.get(code, [])],
            )
        except DegenerateStatisticsError as exc:
            pbc_fields[code] = None
            warnings.append(f"field {code}: point-biserial skipped: {exc}")

    areas = sorted({corpus.fields[code].discipline_area for code in eligible})
    fields_of_area = {
        area: [code for code in eligible if corpus.fields[code].discipline_area == area]
        for area in areas
    }
    area_stats = [
        _gender_battery(
            area, area, _values(fields_of_area[area], Gender.F),
            _values(fields_of_area[area], Gender.M), config.median_test, warnings,
        )
        for area in areas
    ]
    if eligible:
        area_stats.append(
            _gender_battery(
                "TOTAL", "", _values(eligible, Gender.F), _values(eligible, Gender.M),
                config.median_test, warnings,
            )
        )

    shift_rows_field = [
        (code, corpus.researchers[s.researcher_id].gender, s.shift)
        for code in sorted(shifts)
        for s in shifts[code]
    ]
    shift_rows_area = [
        (corpus.fields[code].discipline_area, gender, value)
        for code, gender, value in shift_rows_field
    ]
    shift_by_field = shift_summary(shift_rows_field)
    shift_by_area = shift_summary(shift_rows_area)

    kde_curves: dict[str, tuple[np.ndarray, np.ndarray]] = {}
    for area in areas:
        for gender in (Gender.F, Gender.M):
            values = _values(fields_of_area[area], gender)
            positive = values[values > 0]
            label = f"{_safe_name(area)}_{gender.value}"
            if len(positive) < 2:
                warnings.append(f"kde {label}: skipped, fewer than 2 positive values")
                continue
            try:
                curve = epanechnikov_kde(positive, config.kde_grid, config.kde_bandwidth)
            except DegenerateStatisticsError as exc:
                warnings.append(f"kde {label}: skipped: {exc}")
                continue
            kde_curves[label] = (curve.grid, curve.density)

    return AnalysisResults(
        corpus=corpus,
        eligible=eligible,
        incidence=incidence,
        shares=shares,
        baselines=baselines,
        scores=scores,
        entries=entries,
        shifts=shifts,
        classes=classes,
        field_stats=field_stats,
        area_stats=area_stats,
        pbc_fields=pbc_fields,
        shift_by_field=shift_by_field,
        shift_by_area=shift_by_area,
        kde_curves=kde_curves,
        warnings=warnings,
    )


# --------------------------------------------------------------------------
# Stage writers. Each returns {file name: data row count}.
# --------------------------------------------------------------------------

def write_eligibility(results: AnalysisResults, out_dir: Path, precision: str) -> dict[str, int]:
    corpus = results.corpus
    rows = []
    for code in sorted(corpus.fields):
        members = corpus.researchers_in_field(code)
        n_female = sum(1 for r in members if r.gender is Gender.F)
        n_productive = sum(1 for r in members if corpus.publications_of(r.researcher_id))
        share = n_productive / len(members) if members else None
        rows.append(
            (
                code,
                corpus.fields[code].discipline_area,
                len(members),
                n_female,
                len(members) - n_female,
                n_productive,
                share,
                code in results.eligible,
            )
        )
    counts = {
        "eligibility.csv": _write_csv(
            out_dir / "eligibility.csv",
            ["field_code", "area", "n_researchers", "n_female", "n_male",
             "n_productive", "productive_share", "eligible"],
            rows,
            precision,
        )
    }
    for by in ("field", "area", "rank"):
        name = f"incidence_by_{by}.csv"
        counts[name] = _write_csv(
            out_dir / name,
            ["group", "headcount", "female_share"],
            results.incidence[by],
            precision,
        )
    return counts


def write_shares(results: AnalysisResults, out_dir: Path, precision: str) -> dict[str, int]:
    counts = {
        "shares.csv": _write_csv(
            out_dir / "shares.csv",
            ["publication_id", "slot_index", "share"],
            shares_table(results.shares),
            precision,
        )
    }
    fallbacks = [(pid,) for pid in sorted(results.shares) if results.shares[pid].fallback]
    counts["share_fallbacks.csv"] = _write_csv(
        out_dir / "share_fallbacks.csv", ["publication_id"], fallbacks, precision
    )
    return counts


def write_baselines(results: AnalysisResults, out_dir: Path, precision: str) -> dict[str, int]:
    return {
        "baselines.csv": _write_csv(
            out_dir / "baselines.csv",
            ["year", "subject_category", "mean_cited_citations", "n_cited"],
            baselines_table(results.baselines),
            precision,
        )
    }


def write_fss(results: AnalysisResults, out_dir: Path, precision: str) -> dict[str, int]:
    corpus = results.corpus
    rows = [
        (s.researcher_id, code, corpus.researchers[s.researcher_id].gender, s.value, s.productive)
        for code in sorted(results.scores)
        for s in results.scores[code]
    ]
    return {
        "fss.csv": _write_csv(
            out_dir / "fss.csv",
            ["researcher_id", "field_code", "gender", "fss", "productive"],
            rows,
            precision,
        )
    }


def write_rank_tables(results: AnalysisResults, out_dir: Path, precision: str) -> dict[str, int]:
    entry_rows = [
        (e.researcher_id, e.field_code, e.gender, e.fss, e.ratio_pooled, e.ratio_gender,
         e.percentile_pooled, e.percentile_gender)
        for code in sorted(results.entries)
        for e in results.entries[code]
    ]
    counts = {
        "rank_entries.csv": _write_csv(
            out_dir / "rank_entries.csv",
            ["researcher_id", "field_code", "gender", "fss", "ratio_pooled", "ratio_gender",
             "percentile_pooled", "percentile_gender"],
            entry_rows,
            precision,
        )
    }
    shift_rows = [
        (e.researcher_id, e.field_code, e.gender, e.percentile_pooled, e.percentile_gender,
         s.shift)
        for code in sorted(results.entries)
        for e, s in zip(results.entries[code], results.shifts[code])
    ]
    counts["shifts.csv"] = _write_csv(
        out_dir / "shifts.csv",
        ["researcher_id", "field_code", "gender", "percentile_pooled", "percentile_gender",
         "shift"],
        shift_rows,
        precision,
    )
    class_rows = [
        (code, results.area_of(code), gender, mean_shift, class_label)
        for code in sorted(results.classes)
        for gender, (mean_shift, class_label) in sorted(
            results.classes[code].items(), key=lambda kv: kv[0].value
        )
    ]
    counts["field_classes.csv"] = _write_csv(
        out_dir / "field_classes.csv",
        ["field_code", "area", "gender", "mean_shift", "shift_class"],
        class_rows,
        precision,
    )
    return counts


def write_scatter(results: AnalysisResults, out_dir: Path, precision: str) -> dict[str, int]:
    rows = [
        (e.ratio_pooled, e.ratio_gender, e.gender)
        for code in sorted(results.entries)
        for e in results.entries[code]
    ]
    return {
        "scatter_data.csv": _write_csv(
            out_dir / "scatter_data.csv",
            ["ratio_pooled", "ratio_gender", "gender"],
            rows,
            precision,
        )
    }


def _stats_row(block: FieldStats) -> list:
    def stat_cells(stats: DescriptiveStats | None) -> list:
        if stats is None:
            return [0, None, None, None, None, None, None]
        return [stats.count, stats.pct_zero, stats.mean, stats.median, stats.max,
                stats.stdev, stats.iqr]

    cells_f = stat_cells(block.stats_f)
    cells_m = stat_cells(block.stats_m)
    interleaved = [cell for pair in zip(cells_f, cells_m) for cell in pair]
    tests = [
        block.unproductive_test.statistic if block.unproductive_test else None,
        block.unproductive_test.p_value if block.unproductive_test else None,
        block.location_test.statistic if block.location_test else None,
        block.location_test.p_value if block.location_test else None,
    ]
    return interleaved + tests


_STATS_COLUMNS = [
    "obs_F", "obs_M", "pct_unproductive_F", "pct_unproductive_M", "mean_F", "mean_M",
    "median_F", "median_M", "max_F", "max_M", "stdev_F", "stdev_M", "iqr_F", "iqr_M",
    "unproductive_z", "unproductive_p", "fss_test_stat", "fss_test_p",
]


def write_stats_tables(results: AnalysisResults, out_dir: Path, precision: str) -> dict[str, int]:
    counts = {
        "stats_by_field.csv": _write_csv(
            out_dir / "stats_by_field.csv",
            ["field_code", "area"] + _STATS_COLUMNS,
            [[b.group, b.area] + _stats_row(b) for b in results.field_stats],
            precision,
        ),
        "stats_by_area.csv": _write_csv(
            out_dir / "stats_by_area.csv",
            ["area"] + _STATS_COLUMNS,
            [[b.group] + _stats_row(b) for b in results.area_stats],
            precision,
        ),
    }

    pbc_rows = []
    for code in sorted(results.pbc_fields):
        result = results.pbc_fields[code]
        if result is None:
            pbc_rows.append((code, results.area_of(code), None, None, None, None, None))
        else:
            pbc_rows.append(
                (code, results.area_of(code), result.n_f, result.n_m, result.r_pb,
                 result.t_stat, result.p_value)
            )
    counts["pbc_by_field.csv"] = _write_csv(
        out_dir / "pbc_by_field.csv",
        ["field_code", "area", "n_F", "n_M", "r_pb", "t_stat", "p_value"],
        pbc_rows,
        precision,
    )

    corpus = results.corpus
    scores = results.scores
    area_rows = []
    areas = sorted({results.area_of(code) for code in results.eligible})
    groupings = [(area, [c for c in results.eligible if results.area_of(c) == area])
                 for area in areas]
    if results.eligible:
        groupings.append(("TOTAL", list(results.eligible)))
    for area, codes in groupings:
        field_results = [results.pbc_fields[c] for c in codes if results.pbc_fields.get(c)]
        values = [s.value for c in codes for s in scores.get(c, [])]
        genders = [corpus.researchers[s.researcher_id].gender
                   for c in codes for s in scores.get(c, [])]
        try:
            pooled = point_biserial(values, genders)
        except DegenerateStatisticsError:
            pooled = None
        pct_significant = (
            100.0 * sum(1 for r in field_results if r.p_value < SIGNIFICANCE_LEVEL)
            / len(field_results)
            if field_results
            else None
        )
        area_rows.append(
            (
                area,
                len(codes),
                pct_significant,
                min((r.r_pb for r in field_results), default=None),
                max((r.r_pb for r in field_results), default=None),
                pooled.r_pb if pooled else None,
                pooled.t_stat if pooled else None,
                pooled.p_value if pooled else None,
                significance_stars(pooled.p_value if pooled else None),
            )
        )
    counts["pbc_by_area.csv"] = _write_csv(
        out_dir / "pbc_by_area.csv",
        ["area", "n_fields", "pct_significant_fields", "min_r_pb", "max_r_pb", "r_pb",
         "t_stat", "p_value", "stars"],
        area_rows,
        precision,
    )

    counts["shift_stats_by_field.csv"] = _write_csv(
        out_dir / "shift_stats_by_field.csv",
        ["field_code", "gender", "mean", "median", "stdev", "min", "max"],
        results.shift_by_field,
        precision,
    )
    counts["shift_stats_by_area.csv"] = _write_csv(
        out_dir / "shift_stats_by_area.csv",
        ["area", "gender", "mean", "median", "stdev", "min", "max"],
        results.shift_by_area,
        precision,
    )
    return counts


def write_kde(results: AnalysisResults, out_dir: Path, precision: str) -> dict[str, int]:
    counts = {}
    for label in sorted(results.kde_curves):
        grid, density = results.kde_curves[label]
        name = f"kde_{label}.csv"
        counts[name] = _write_csv(
            out_dir / name, ["grid", "density"], zip(grid, density), precision
        )
    return counts


STAGE_WRITERS = {
    "ingest": write_eligibility,
    "shares": write_shares,
    "baselines": write_baselines,
    "compute": write_fss,
    "rank": write_rank_tables,
    "stats": write_stats_tables,
    "kde": write_kde,
    "scatter": write_scatter,
}


def run_pipeline(config: RunConfig, results: AnalysisResults | None = None) -> RunManifest:
    """Execute every stage in order and write the manifest.

    On a stage failure all files already written by this run are removed
    and a PipelineStageError naming the stage is raised. A precomputed
    ``results`` (from :func:`analyze` on the same config) is reused.
    """
    out_dir = config.out_dir
    out_dir.mkdir(parents=True, exist_ok=True)
    written: list[Path] = []
    row_counts: dict[str, int] = {}

    def _run_stage(stage: str, writer) -> None:
        try:
            counts = writer()
        except Exception as exc:
            for path in written:
                path.unlink(missing_ok=True)
            raise PipelineStageError(stage, exc) from exc
        for name, count in counts.items():
            written.append(out_dir / name)
            row_counts[name] = count

    if results is None:
        try:
            results = analyze(config)
        except Exception as exc:
            raise PipelineStageError("ingest", exc) from exc

    for stage in ("ingest", "shares", "baselines", "compute", "rank", "stats", "kde", "scatter"):
        writer = STAGE_WRITERS[stage]
        _run_stage(stage, lambda w=writer: w(results, out_dir, config.precision))

    def _write_summary() -> dict[str, int]:
        text = render_summary(out_dir)
        (out_dir / "summary.txt").write_text(text, encoding="utf-8")
        return {"summary.txt": text.count("\n")}

    _run_stage("report", _write_summary)

    digests = {}
    for name in CORPUS_FILES:
        path = config.corpus_dir / name
        if path.is_file():
            digests[name] = _sha256(path)
    if config.baselines_override is not None and config.baselines_override.is_file():
        digests[config.baselines_override.name] = _sha256(config.baselines_override)

    manifest = RunManifest(
        config=config.snapshot(),
        input_digests=digests,
        row_counts=row_counts,
        version=__version__,
        timestamp=_dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds"),
    )
    (out_dir / "manifest.json").write_text(manifest.to_json(), encoding="utf-8")
    return manifest


# --------------------------------------------------------------------------
# Plain-text summary (reads emitted files, so `report` works standalone).
# --------------------------------------------------------------------------

def _read_table(out_dir: Path, name: str) -> list[dict[str, str]]:
    path = out_dir / name
    if not path.is_file():
        raise ValidationError(f"missing pipeline output {name}; run the upstream stage first")
    with path.open(newline="", encoding="utf-8") as handle:
        return list(csv.DictReader(handle))


def _maybe_float(cell: str | None) -> float | None:
    if cell is None or cell == "":
        return None
    return float(cell)


def render_summary(out_dir: str | Path) -> str:
    """Plain-text per-area digest of the pipeline outputs."""
    out_dir = Path(out_dir)
    eligibility = _read_table(out_dir, "eligibility.csv")
    eligible = [row["field_code"] for row in eligibility if row["eligible"] == "true"]

    lines = ["research productivity summary", "=" * 30, ""]
    lines.append(f"fields analyzed: {len(eligibility)}, eligible: {len(eligible)}")
    if not eligible:
        lines.append("no eligible fields")
        return "\n".join(lines) + "\n"

    incidence = {row["group"]: row for row in _read_table(out_dir, "incidence_by_area.csv")}
    area_stats = {row["area"]: row for row in _read_table(out_dir, "stats_by_area.csv")}
    pbc_area = {row["area"]: row for row in _read_table(out_dir, "pbc_by_area.csv")}
    shift_area: dict[tuple[str, str], dict[str, str]] = {
        (row["area"], row["gender"]): row for row in _read_table(out_dir, "shift_stats_by_area.csv")
    }
    class_counts: dict[tuple[str, str], dict[str, int]] = {}
    for row in _read_table(out_dir, "field_classes.csv"):
        key = (row["area"], row["gender"])
        bucket = class_counts.setdefault(key, {})
        bucket[row["shift_class"]] = bucket.get(row["shift_class"], 0) + 1

    areas = sorted(a for a in area_stats if a != "TOTAL")
    for area in areas:
        stats = area_stats[area]
        lines.append("")
        lines.append(f"area {area}")
        lines.append("-" * (5 + len(area)))
        head = incidence.get(area)
        if head is not None:
            share = 100.0 * float(head["female_share"])
            lines.append(f"  headcount {head['headcount']}, female share {share:.1f}%")
        mean_f = _maybe_float(stats.get("mean_F"))
        mean_m = _maybe_float(stats.get("mean_M"))
        stars = significance_stars(_maybe_float(stats.get("fss_test_p")))
        if mean_f is not None and mean_m is not None:
            lines.append(f"  mean FSS: F {mean_f:.4g}, M {mean_m:.4g}{stars}")
        pbc = pbc_area.get(area)
        if pbc is not None and pbc.get("r_pb"):
            lines.append(f"  gender/FSS correlation r_pb {float(pbc['r_pb']):.4g}{pbc['stars']}")
        for gender in ("F", "M"):
            shift = shift_area.get((area, gender))
            if shift is not None:
                lines.append(
                    f"  mean shift {gender}: {float(shift['mean']):+.2f} percentile points"
                )
        for gender in ("F", "M"):
            bucket = class_counts.get((area, gender))
            if bucket:
                parts = [f"{label} x{bucket[label]}" for label in sorted(bucket)]
                lines.append(f"  field classes {gender}: " + ", ".join(parts))

    total = area_stats.get("TOTAL")
    if total is not None:
        lines.append("")
        mean_f = _maybe_float(total.get("mean_F"))
        mean_m = _maybe_float(total.get("mean_M"))
        stars = significance_stars(_maybe_float(total.get("fss_test_p")))
        if mean_f is not None and mean_m is not None:
            lines.append(f"overall mean FSS: F {mean_f:.4g}, M {mean_m:.4g}{stars}")
    return "\n".join(lines) + "\n"
