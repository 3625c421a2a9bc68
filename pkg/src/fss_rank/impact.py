"""Citation baselines per (year, subject category) and impact normalization.

The baseline of a cell is the arithmetic mean of citations over the
*cited* publications in that cell (zeros excluded), so it is defined
exactly where at least one cited publication exists. A publication's
normalized impact is its citation count divided by the baseline,
averaged over its subject categories.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from pathlib import Path

from .corpus import Corpus, Publication
from .errors import DataInconsistencyError, ValidationError

Cell = tuple[int, str]


@dataclass(frozen=True)
class CitationBaseline:
    """Mean citations of cited publications per (year, category) cell."""

    means: dict[Cell, float]
    counts: dict[Cell, int] = field(default_factory=dict)

    def __post_init__(self) -> None:
        for cell, mean in self.means.items():
            if not mean > 0:
                raise ValidationError(f"baseline for {cell} must be > 0, got {mean}")

    def get(self, year: int, category: str) -> float | None:
        return self.means.get((year, category))

    def __contains__(self, cell: Cell) -> bool:
        return cell in self.means

    def __len__(self) -> int:
        return len(self.means)


def compute_baselines(corpus: Corpus) -> CitationBaseline:
    """Build baselines from the corpus itself (cited publications only)."""
    totals: dict[Cell, int] = {}
    counts: dict[Cell, int] = {}
    for publication in corpus.publications.values():
        if publication.citations == 0:
            continue
        for category in publication.subject_categories:
            cell = (publication.year, category)
            totals[cell] = totals.get(cell, 0) + publication.citations
            counts[cell] = counts.get(cell, 0) + 1
    means = {cell: totals[cell] / counts[cell] for cell in totals}
    return CitationBaseline(means, counts)


def load_baselines_csv(path: str | Path) -> CitationBaseline:
    """Read an override baselines file: year,subject_category,mean_cited_citations."""
    path = Path(path)
    if not path.is_file():
        raise ValidationError(f"missing baselines file: {path}")
    means: dict[Cell, float] = {}
    counts: dict[Cell, int] = {}
    with path.open(newline="", encoding="utf-8") as handle:
        reader = csv.DictReader(handle)
        required = {"year", "subject_category", "mean_cited_citations"}
        if reader.fieldnames is None or not required.issubset(reader.fieldnames):
            raise ValidationError(f"{path.name}:1: header must contain {sorted(required)}")
        for row in reader:
            line = reader.line_num
            try:
                year = int(row["year"])
                mean = float(row["mean_cited_citations"])
            except (TypeError, ValueError):
                raise ValidationError(f"{path.name}:{line}: malformed row {row!r}") from None
            category = (row["subject_category"] or "").strip()
            if not category:
                raise ValidationError(f"{path.name}:{line}: empty subject_category")
            cell = (year, category)
            if cell in means:
                raise ValidationError(f"{path.name}:{line}: duplicate cell {cell}")
            if not mean > 0:
                raise ValidationError(f"{path.name}:{line}: baseline must be > 0, got {mean}")
            means[cell] = mean
            if row.get("n_cited"):
                counts[cell] = int(row["n_cited"])
    return CitationBaseline(means, counts)


def normalized_impact(publication: Publication, baselines: CitationBaseline) -> float:
    """Citations scaled by the per-cell baseline, averaged over categories.

    Uncited publications score 0. For cited publications, categories whose
    cell has no baseline are skipped; if every cell is missing the data is
    inconsistent (cannot happen when baselines come from the same corpus).
    """
    if publication.citations == 0:
        return 0.0
    ratios = [
        publication.citations / baselines.means[(publication.year, category)]
        for category in publication.subject_categories
        if (publication.year, category) in baselines
    ]
    if not ratios:
        raise DataInconsistencyError(
            f"publication {publication.publication_id!r} is cited but no baseline covers "
            f"any of its cells {[(publication.year, c) for c in publication.subject_categories]}"
        )
    return sum(ratios) / len(ratios)


def baselines_table(baselines: CitationBaseline) -> list[tuple[int, str, float, int]]:
    """Flatten to (year, category, mean, n_cited) rows, sorted."""
    return [
        (year, category, baselines.means[(year, category)], baselines.counts.get((year, category), 0))
        for year, category in sorted(baselines.means)
    ]
