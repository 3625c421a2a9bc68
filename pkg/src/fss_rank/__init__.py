"""Research-productivity scoring and gender-stratified rank-shift analysis.

The package computes a wage- and time-normalized productivity score for
every researcher in a corpus (fractional authorship credit times
field-normalized citation impact), builds pooled and gender-stratified
percentile ranking lists per field, and quantifies how each researcher's
percentile moves between the two lists.
"""

__version__ = "0.1.0"

from .corpus import (
    BylineConvention,
    BylineSlot,
    Corpus,
    Field,
    Gender,
    Publication,
    Researcher,
    Window,
    filter_eligible_fields,
    gender_incidence_report,
    load_corpus,
    save_corpus,
)
from .credit import (
    CreditWeights,
    DEFAULT_WEIGHTS,
    ShareVector,
    compute_all_shares,
    fractional_shares,
)
from .errors import (
    DataInconsistencyError,
    DegenerateStatisticsError,
    FssRankError,
    PipelineStageError,
    ValidationError,
)
from .fss import FssScore, compute_all_fss, compute_fss
from .impact import CitationBaseline, compute_baselines, load_baselines_csv, normalized_impact
from .pipeline import AnalysisResults, RunConfig, RunManifest, analyze, render_summary, run_pipeline
from .ranking import (
    RankEntry,
    RankShift,
    ShiftClass,
    classify_field_shifts,
    classify_shift,
    distance_ratios,
    percentile_ranks,
    rank_shifts,
    shift_summary,
)
from .stats import (
    DensityCurve,
    DescriptiveStats,
    PointBiserialResult,
    TestResult,
    descriptive_stats,
    epanechnikov_kde,
    mann_whitney_u,
    point_biserial,
    silverman_bandwidth,
    significance_stars,
    t_test_independent,
    z_test_proportions,
)

__all__ = [
    "AnalysisResults",
    "BylineConvention",
    "BylineSlot",
    "CitationBaseline",
    "Corpus",
    "CreditWeights",
    "DEFAULT_WEIGHTS",
    "DataInconsistencyError",
    "DegenerateStatisticsError",
    "DensityCurve",
    "DescriptiveStats",
    "Field",
    "FssRankError",
    "FssScore",
    "Gender",
    "PipelineStageError",
    "PointBiserialResult",
    "Publication",
    "RankEntry",
    "RankShift",
    "Researcher",
    "RunConfig",
    "RunManifest",
    "ShareVector",
    "ShiftClass",
    "TestResult",
    "ValidationError",
    "Window",
    "analyze",
    "classify_field_shifts",
    "classify_shift",
    "compute_all_fss",
    "compute_all_shares",
    "compute_baselines",
    "compute_fss",
    "descriptive_stats",
    "distance_ratios",
    "epanechnikov_kde",
    "filter_eligible_fields",
    "fractional_shares",
    "gender_incidence_report",
    "load_baselines_csv",
    "load_corpus",
    "mann_whitney_u",
    "normalized_impact",
    "percentile_ranks",
    "point_biserial",
    "rank_shifts",
    "render_summary",
    "run_pipeline",
    "save_corpus",
    "shift_summary",
    "significance_stars",
    "silverman_bandwidth",
    "t_test_independent",
    "z_test_proportions",
]
