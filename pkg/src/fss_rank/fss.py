"""The productivity score: wage- and time-normalized fractional impact.

For each researcher the score is

    (1 / wage) * (1 / years_active) * sum over authored publications of
    normalized_impact * own fractional share

where the sum runs over in-window publications on whose byline the
researcher appears. Shares held by external co-authors dilute the
in-corpus shares but are never credited to anyone.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping

from .corpus import Corpus, Researcher
from .credit import ShareVector, own_share
from .errors import DataInconsistencyError, ValidationError
from .impact import CitationBaseline, normalized_impact


@dataclass(frozen=True)
class FssScore:
    researcher_id: str
    value: float
    productive: bool

    def __post_init__(self) -> None:
        if self.value < 0:
            raise ValidationError(f"score must be >= 0, got {self.value}")
        if self.productive != (self.value > 0):
            raise ValidationError("productive flag must equal (value > 0)")


def compute_fss(
    researcher: Researcher,
    corpus: Corpus,
    shares: Mapping[str, ShareVector],
    baselines: CitationBaseline,
    wages: Mapping[str, float] | None = None,
) -> FssScore:
    """Score one researcher; raises if a share vector or wage is missing."""
    wage_table = corpus.wages if wages is None else wages
    wage = wage_table.get(researcher.rank)
    if wage is None or not wage > 0:
        raise ValidationError(
            f"researcher {researcher.researcher_id!r}: rank {researcher.rank!r} "
            f"has no positive wage (got {wage})"
        )
    if researcher.years_active < 1:
        raise ValidationError(
            f"researcher {researcher.researcher_id!r}: years_active must be >= 1"
        )

    total = 0.0
    for publication_id in corpus.publications_of(researcher.researcher_id):
        publication = corpus.publications[publication_id]
        if publication.year not in corpus.window:
            continue
        vector = shares.get(publication_id)
        if vector is None:
            raise DataInconsistencyError(
                f"missing share vector for publication {publication_id!r} "
                f"authored by {researcher.researcher_id!r}"
            )
        total += normalized_impact(publication, baselines) * own_share(
            publication.byline, vector, researcher.researcher_id
        )
    value = total / (wage * researcher.years_active)
    return FssScore(researcher.researcher_id, value, productive=value > 0)


def compute_all_fss(
    corpus: Corpus,
    shares: Mapping[str, ShareVector],
    baselines: CitationBaseline,
    wages: Mapping[str, float] | None = None,
    fields: Iterable[str] | None = None,
) -> dict[str, list[FssScore]]:
    """Scores grouped by field, each list ordered by researcher_id.

    ``fields`` restricts the computation (e.g. to the eligible set);
    None means every field with at least one researcher.
    """
    wanted = None if fields is None else set(fields)
    grouped: dict[str, list[FssScore]] = {}
    for researcher in corpus.researchers.values():
        code = researcher.field_code
        if wanted is not None and code not in wanted:
            continue
        grouped.setdefault(code, []).append(
            compute_fss(researcher, corpus, shares, baselines, wages)
        )
    for scores in grouped.values():
        scores.sort(key=lambda s: s.researcher_id)
    return dict(sorted(grouped.items()))
