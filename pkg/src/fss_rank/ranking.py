"""Pooled vs. gender-stratified ranking lists and percentile rank shifts.

Each field member gets two ratios: score over the mean score of the
field's productive members (pooled), and score over the mean of the
productive members of their own gender (stratified). Percentiles run
0-100, worst to best, with midrank tie handling. The default stratified
ranking re-ranks every field member together on the gender-normalized
ratios (one merged list); a per-gender variant is available.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from enum import Enum
from typing import Iterable, Mapping, NamedTuple, Sequence

import numpy as np
from scipy.stats import rankdata

from .corpus import Gender
from .errors import DegenerateStatisticsError, ValidationError

MERGED = "merged"
SEPARATE = "separate"


@dataclass(frozen=True)
class RankEntry:
    researcher_id: str
    field_code: str
    gender: Gender
    fss: float
    ratio_pooled: float
    ratio_gender: float
    percentile_pooled: float | None = None
    percentile_gender: float | None = None


class RankShift(NamedTuple):
    researcher_id: str
    shift: float


class ShiftClass(Enum):
    """Half-open bins for a field's mean percentile shift."""

    CL1 = "Cl-1"  # < -8
    CL2 = "Cl-2"  # >= -8 and < -4
    CL3 = "Cl-3"  # >= -4 and < 0
    CL4 = "Cl-4"  # >= 0 and < +4
    CL5 = "Cl-5"  # >= +4 and < +8
    CL6 = "Cl-6"  # >= +8

    def __str__(self) -> str:  # pragma: no cover - cosmetic
        return self.value


class GenderShift(NamedTuple):
    mean_shift: float
    shift_class: ShiftClass


class ShiftSummaryRow(NamedTuple):
    group: str
    gender: Gender
    mean: float
    median: float
    stdev: float
    min: float
    max: float


def percentile_ranks(scores: Sequence[float]) -> np.ndarray:
    """Midrank percentiles on a 0-100 scale, 100 = best.

    percentile = 100 * (midrank - 1) / (n - 1), where midrank averages the
    ordinal ranks of tied values (rank 1 = worst). Undefined for fewer
    than two scores.
    """
    n = len(scores)
    if n < 2:
        raise DegenerateStatisticsError(f"percentile ranks need >= 2 scores, got {n}")
    ranks = rankdata(np.asarray(scores, dtype=float), method="average")
    return 100.0 * (ranks - 1.0) / (n - 1.0)


def distance_ratios(
    fss_values: Sequence[float],
    genders: Sequence[Gender],
    researcher_ids: Sequence[str] | None = None,
    field_code: str = "",
    pooled_mean: float | None = None,
    gender_means: Mapping[Gender, float] | None = None,
) -> list[RankEntry]:
    """Ratios of each score to the productive pooled and same-gender means.

    Means are computed over productive (score > 0) members only;
    unproductive members keep ratio 0. Explicit ``pooled_mean`` /
    ``gender_means`` override the computed denominators, which supports
    scoring a subset of a field against externally known means.
    """
    values = np.asarray(fss_values, dtype=float)
    if len(values) != len(genders):
        raise ValidationError("fss_values and genders must have equal length")
    if researcher_ids is None:
        researcher_ids = [str(i) for i in range(len(values))]
    if len(researcher_ids) != len(values):
        raise ValidationError("researcher_ids and fss_values must have equal length")
    if np.any(values < 0):
        raise ValidationError("scores must be nonnegative")

    productive = values > 0
    if pooled_mean is None:
        if not productive.any():
            raise DegenerateStatisticsError(
                f"field {field_code!r}: no productive member, pooled mean undefined"
            )
        pooled_mean = float(values[productive].mean())
    if not pooled_mean > 0:
        raise ValidationError(f"pooled mean must be > 0, got {pooled_mean}")

    present = sorted({g for g in genders}, key=lambda g: g.value)
    means: dict[Gender, float] = dict(gender_means) if gender_means else {}
    for gender in present:
        if gender in means:
            if not means[gender] > 0:
                raise ValidationError(f"gender mean for {gender} must be > 0")
            continue
        mask = np.array([g is gender for g in genders]) & productive
        if not mask.any():
            raise DegenerateStatisticsError(
                f"field {field_code!r}: no productive {gender.value} member, "
                f"gender ratios undefined"
            )
        means[gender] = float(values[mask].mean())

    return [
        RankEntry(
            researcher_id=rid,
            field_code=field_code,
            gender=gender,
            fss=float(value),
            ratio_pooled=float(value) / pooled_mean,
            ratio_gender=float(value) / means[gender],
        )
        for rid, gender, value in zip(researcher_ids, genders, values)
    ]


def rank_shifts(
    entries: Sequence[RankEntry], variant: str = MERGED
) -> tuple[list[RankEntry], list[RankShift]]:
    """Percentile both ranking lists and return the per-member shifts.

    The merged variant (default) percentiles all field members together
    under both the pooled and the gender-normalized ratios. The separate
    variant percentiles the stratified list within each gender subgroup,
    which then needs at least two members per gender.
    """
    if variant not in (MERGED, SEPARATE):
        raise ValidationError(f"variant must be '{MERGED}' or '{SEPARATE}', got {variant!r}")
    if len(entries) < 2:
        raise DegenerateStatisticsError(f"ranking needs >= 2 members, got {len(entries)}")

    pooled = percentile_ranks([e.ratio_pooled for e in entries])
    if variant == MERGED:
        stratified = percentile_ranks([e.ratio_gender for e in entries])
    else:
        stratified = np.empty(len(entries))
        for gender in {e.gender for e in entries}:
            idx = [i for i, e in enumerate(entries) if e.gender is gender]
            if len(idx) < 2:
                raise DegenerateStatisticsError(
                    f"separate-list ranking needs >= 2 members per gender, "
                    f"{gender.value} has {len(idx)}"
                )
            stratified[idx] = percentile_ranks([entries[i].ratio_gender for i in idx])

    ranked = [
        replace(entry, percentile_pooled=float(pp), percentile_gender=float(pg))
        for entry, pp, pg in zip(entries, pooled, stratified)
    ]
    shifts = [
        RankShift(e.researcher_id, e.percentile_gender - e.percentile_pooled) for e in ranked
    ]
    return ranked, shifts


def classify_shift(mean_shift: float) -> ShiftClass:
    """Map a mean percentile shift to its class bin."""
    if not math.isfinite(mean_shift):
        raise ValidationError(f"mean shift must be finite, got {mean_shift}")
    if mean_shift < -8:
        return ShiftClass.CL1
    if mean_shift < -4:
        return ShiftClass.CL2
    if mean_shift < 0:
        return ShiftClass.CL3
    if mean_shift < 4:
        return ShiftClass.CL4
    if mean_shift < 8:
        return ShiftClass.CL5
    return ShiftClass.CL6


def classify_field_shifts(
    shifts: Sequence[float], genders: Sequence[Gender]
) -> dict[Gender, GenderShift]:
    """Mean shift and class per gender over one field's members."""
    if len(shifts) != len(genders):
        raise ValidationError("shifts and genders must have equal length")
    if not shifts:
        raise ValidationError("shifts must be nonempty")
    result: dict[Gender, GenderShift] = {}
    for gender in sorted({g for g in genders}, key=lambda g: g.value):
        values = [s for s, g in zip(shifts, genders) if g is gender]
        mean = float(np.mean(values))
        result[gender] = GenderShift(mean, classify_shift(mean))
    return result


def shift_summary(
    rows: Iterable[tuple[str, Gender, float]],
) -> list[ShiftSummaryRow]:
    """Descriptive statistics of shifts per (group, gender).

    ``rows`` are (group_label, gender, shift) triples; the group label is
    whatever stratum the caller wants (field code or discipline area).
    """
    buckets: dict[tuple[str, Gender], list[float]] = {}
    for group, gender, shift in rows:
        buckets.setdefault((group, gender), []).append(shift)
    summary = []
    for (group, gender), values in sorted(buckets.items(), key=lambda kv: (kv[0][0], kv[0][1].value)):
        data = np.asarray(values, dtype=float)
        stdev = float(np.std(data, ddof=1)) if len(data) > 1 else 0.0
        summary.append(
            ShiftSummaryRow(
                group,
                gender,
                float(data.mean()),
                float(np.median(data)),
                stdev,
                float(data.min()),
                float(data.max()),
            )
        )
    return summary
