"""Fractional authorship credit from byline position and affiliation pattern.

Two weighting schemes exist for contribution-ordered fields. When the
first and last author share an affiliation, the two of them take 40%
each and the remaining 20% is split over the middle authors. Otherwise
first and last take 30% each, second and penultimate 15% each, and the
remaining 10% is split over everyone else. Alphabetical fields always
split uniformly. Bylines too short for the positional weights to be
distinct fall back to a uniform split and are flagged.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping, Sequence

from .corpus import BylineConvention, BylineSlot, Corpus
from .errors import ValidationError

#: Sum-to-one tolerance used by validation and tests alike.
SHARE_TOLERANCE = 1e-12


@dataclass(frozen=True)
class CreditWeights:
    """Configurable positional weights; defaults follow life-science practice."""

    intramural_end: float = 0.40
    intramural_rest: float = 0.20
    extramural_end: float = 0.30
    extramural_near_end: float = 0.15
    extramural_rest: float = 0.10

    def __post_init__(self) -> None:
        values = (
            self.intramural_end,
            self.intramural_rest,
            self.extramural_end,
            self.extramural_near_end,
            self.extramural_rest,
        )
        if any(not 0 < v < 1 for v in values):
            raise ValidationError(f"credit weights must lie in (0,1), got {values}")
        if not math.isclose(2 * self.intramural_end + self.intramural_rest, 1.0, abs_tol=SHARE_TOLERANCE):
            raise ValidationError("intramural weights must satisfy 2*end + rest = 1")
        total = 2 * self.extramural_end + 2 * self.extramural_near_end + self.extramural_rest
        if not math.isclose(total, 1.0, abs_tol=SHARE_TOLERANCE):
            raise ValidationError("extramural weights must satisfy 2*end + 2*near_end + rest = 1")


DEFAULT_WEIGHTS = CreditWeights()


@dataclass(frozen=True)
class ShareVector:
    """Per-slot authorship shares for one publication; shares sum to one.

    ``fallback`` marks contribution-ordered bylines that were too short
    for distinct positional weights and were split uniformly instead.
    """

    publication_id: str
    shares: tuple[float, ...]
    fallback: bool = False

    def __post_init__(self) -> None:
        if not self.shares:
            raise ValidationError("share vector must not be empty")
        if any(s <= 0 for s in self.shares):
            raise ValidationError(f"shares must be strictly positive, got {self.shares}")
        if not math.isclose(sum(self.shares), 1.0, abs_tol=SHARE_TOLERANCE):
            raise ValidationError(f"shares must sum to 1, got {sum(self.shares)}")


def fractional_shares(
    byline: Sequence[BylineSlot],
    convention: BylineConvention,
    weights: CreditWeights = DEFAULT_WEIGHTS,
    publication_id: str = "",
) -> ShareVector:
    """Compute the per-slot share vector for one byline.

    The intramural scheme applies when the first and last slot carry the
    same affiliation_id (exact string comparison) and needs at least 3
    authors; the extramural scheme needs at least 5. Shorter
    contribution-ordered bylines of more than one author are split
    uniformly with the fallback flag set.
    """
    n = len(byline)
    if n == 0:
        raise ValidationError("byline must contain at least one slot")

    if convention is BylineConvention.ALPHABETICAL or n == 1:
        return ShareVector(publication_id, (1.0 / n,) * n)

    same_ends = byline[0].affiliation_id == byline[-1].affiliation_id
    if same_ends and n >= 3:
        middle = weights.intramural_rest / (n - 2)
        shares = (weights.intramural_end, *([middle] * (n - 2)), weights.intramural_end)
        return ShareVector(publication_id, shares)
    if not same_ends and n >= 5:
        rest = weights.extramural_rest / (n - 4)
        shares = (
            weights.extramural_end,
            weights.extramural_near_end,
            *([rest] * (n - 4)),
            weights.extramural_near_end,
            weights.extramural_end,
        )
        return ShareVector(publication_id, shares)
    return ShareVector(publication_id, (1.0 / n,) * n, fallback=True)


def publication_convention(corpus: Corpus, publication_id: str) -> BylineConvention:
    """Byline convention governing a publication.

    Conventions are declared per field, so a publication inherits the
    convention of the field of its first in-corpus author. Bylines with
    no in-corpus author default to alphabetical (uniform split); no
    researcher draws credit from them anyway.
    """
    publication = corpus.publications[publication_id]
    for slot in publication.byline:
        if slot.researcher_id is not None:
            field_code = corpus.researchers[slot.researcher_id].field_code
            return corpus.fields[field_code].byline_convention
    return BylineConvention.ALPHABETICAL


def compute_all_shares(
    corpus: Corpus, weights: CreditWeights = DEFAULT_WEIGHTS
) -> dict[str, ShareVector]:
    """Share vectors for every publication in the corpus, keyed by id."""
    return {
        pid: fractional_shares(
            corpus.publications[pid].byline,
            publication_convention(corpus, pid),
            weights,
            publication_id=pid,
        )
        for pid in sorted(corpus.publications)
    }


def own_share(publication_byline: Sequence[BylineSlot], shares: ShareVector, researcher_id: str) -> float:
    """Total share a researcher holds in one publication (0 if absent)."""
    return sum(
        shares.shares[slot.slot_index]
        for slot in publication_byline
        if slot.researcher_id == researcher_id
    )


def external_share_mass(publication_byline: Sequence[BylineSlot], shares: ShareVector) -> float:
    """Share mass held by external (non-corpus) co-authors."""
    return sum(
        shares.shares[slot.slot_index]
        for slot in publication_byline
        if slot.researcher_id is None
    )


def load_weights_file(path) -> CreditWeights:
    """Read a key=value weights file; unknown keys are rejected."""
    from pathlib import Path

    text = Path(path).read_text(encoding="utf-8")
    values: dict[str, float] = {}
    allowed = set(CreditWeights.__dataclass_fields__)
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        if "=" not in stripped:
            raise ValidationError(f"{path}:{lineno}: expected key=value, got {line!r}")
        key, _, raw = stripped.partition("=")
        key = key.strip()
        if key not in allowed:
            raise ValidationError(f"{path}:{lineno}: unknown weight {key!r}, allowed: {sorted(allowed)}")
        try:
            values[key] = float(raw.strip())
        except ValueError:
            raise ValidationError(f"{path}:{lineno}: not a number: {raw.strip()!r}") from None
    return CreditWeights(**values)


def shares_table(
    shares: Mapping[str, ShareVector],
) -> list[tuple[str, int, float]]:
    """Flatten share vectors into (publication_id, slot_index, share) rows."""
    rows: list[tuple[str, int, float]] = []
    for pid in sorted(shares):
        for index, share in enumerate(shares[pid].shares):
            rows.append((pid, index, share))
    return rows
