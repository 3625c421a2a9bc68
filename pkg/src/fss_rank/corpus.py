"""Data model, CSV ingestion and field-eligibility filters.

A corpus bundles five tables (researchers, fields, publications, bylines
folded into publications, wages) plus the observation window. Loading is
strict: every referential-integrity violation is reported with file, line
and column, and a loaded corpus is treated as immutable afterwards.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Iterator, NamedTuple

from .errors import ValidationError

RESEARCHERS_FILE = "researchers.csv"
FIELDS_FILE = "fields.csv"
PUBLICATIONS_FILE = "publications.csv"
BYLINES_FILE = "bylines.csv"
WAGES_FILE = "wages.csv"

CORPUS_FILES = (RESEARCHERS_FILE, FIELDS_FILE, PUBLICATIONS_FILE, BYLINES_FILE, WAGES_FILE)

#: Canonical academic ranks; wages.csv may declare finer-grained codes,
#: in which case researcher rows may use those as well.
CANONICAL_RANKS = ("assistant", "associate", "full")


class Gender(str, Enum):
    F = "F"
    M = "M"

    def __str__(self) -> str:  # pragma: no cover - cosmetic
        return self.value


class BylineConvention(str, Enum):
    ALPHABETICAL = "alphabetical"
    CONTRIBUTION_ORDERED = "contribution_ordered"

    def __str__(self) -> str:  # pragma: no cover - cosmetic
        return self.value


@dataclass(frozen=True)
class Window:
    """Closed observation window in calendar years, e.g. Window(2006, 2010)."""

    start: int
    end: int

    def __post_init__(self) -> None:
        if self.start > self.end:
            raise ValidationError(f"window start {self.start} is after end {self.end}")

    @property
    def length(self) -> int:
        return self.end - self.start + 1

    def __contains__(self, year: int) -> bool:
        return self.start <= year <= self.end

    def __str__(self) -> str:
        return f"{self.start}:{self.end}"

    @classmethod
    def parse(cls, text: str) -> "Window":
        """Parse 'A:B' into a Window; raises ValidationError on bad input."""
        parts = text.split(":")
        if len(parts) != 2:
            raise ValidationError(f"window must look like '2006:2010', got {text!r}")
        try:
            start, end = int(parts[0]), int(parts[1])
        except ValueError:
            raise ValidationError(f"window bounds must be integers, got {text!r}") from None
        return cls(start, end)


@dataclass(frozen=True)
class Researcher:
    researcher_id: str
    gender: Gender
    rank: str
    field_code: str
    years_active: int
    affiliation_id: str


@dataclass(frozen=True)
class Field:
    field_code: str
    discipline_area: str
    byline_convention: BylineConvention


@dataclass(frozen=True)
class BylineSlot:
    """One author position; researcher_id is None for external co-authors."""

    slot_index: int
    researcher_id: str | None
    affiliation_id: str


@dataclass(frozen=True)
class Publication:
    publication_id: str
    year: int
    subject_categories: tuple[str, ...]
    citations: int
    byline: tuple[BylineSlot, ...]


@dataclass(frozen=True)
class Corpus:
    """Immutable, cross-validated snapshot of all input tables."""

    researchers: dict[str, Researcher]
    fields: dict[str, Field]
    publications: dict[str, Publication]
    wages: dict[str, float]
    window: Window
    _author_index: dict[str, tuple[str, ...]] = field(
        default_factory=dict, compare=False, repr=False
    )

    def __post_init__(self) -> None:
        index: dict[str, list[str]] = {}
        for pub in self.publications.values():
            for slot in pub.byline:
                if slot.researcher_id is not None:
                    index.setdefault(slot.researcher_id, []).append(pub.publication_id)
        frozen = {rid: tuple(sorted(set(pids))) for rid, pids in index.items()}
        object.__setattr__(self, "_author_index", frozen)

    def publications_of(self, researcher_id: str) -> tuple[str, ...]:
        """Publication ids on whose byline the researcher appears, sorted."""
        return self._author_index.get(researcher_id, ())

    def researchers_in_field(self, field_code: str) -> list[Researcher]:
        return [r for r in self.researchers.values() if r.field_code == field_code]

    def row_counts(self) -> dict[str, int]:
        return {
            "researchers": len(self.researchers),
            "fields": len(self.fields),
            "publications": len(self.publications),
            "byline_slots": sum(len(p.byline) for p in self.publications.values()),
            "wages": len(self.wages),
        }


class IncidenceRow(NamedTuple):
    group: str
    headcount: int
    female_share: float


def _where(path: Path, line: int, column: str) -> str:
    return f"{path.name}:{line}: column '{column}'"


def _read_rows(path: Path, columns: tuple[str, ...]) -> Iterator[tuple[int, dict[str, str]]]:
    """Yield (line_number, row_dict) from a CSV file, validating the header."""
    if not path.is_file():
        raise ValidationError(f"missing input file: {path}")
    with path.open(newline="", encoding="utf-8") as handle:
        reader = csv.reader(handle)
        try:
            header = next(reader)
        except StopIteration:
            raise ValidationError(f"{path.name}:1: empty file, header row is mandatory") from None
        missing = [c for c in columns if c not in header]
        if missing:
            raise ValidationError(f"{path.name}:1: missing columns {missing}, got {header}")
        positions = {c: header.index(c) for c in columns}
        for line, raw in enumerate(reader, start=2):
            if not raw:
                continue
            if len(raw) < len(header):
                raise ValidationError(
                    f"{path.name}:{line}: expected {len(header)} cells, got {len(raw)}"
                )
            yield line, {c: raw[positions[c]] for c in columns}


def _parse_int(value: str, path: Path, line: int, column: str, minimum: int | None = None) -> int:
    try:
        parsed = int(value)
    except ValueError:
        raise ValidationError(f"{_where(path, line, column)}: not an integer: {value!r}") from None
    if minimum is not None and parsed < minimum:
        raise ValidationError(f"{_where(path, line, column)}: must be >= {minimum}, got {parsed}")
    return parsed


def _require(value: str, path: Path, line: int, column: str) -> str:
    if not value:
        raise ValidationError(f"{_where(path, line, column)}: must not be empty")
    return value


def _load_wages(path: Path) -> dict[str, float]:
    wages: dict[str, float] = {}
    for line, row in _read_rows(path, ("rank", "avg_yearly_wage")):
        rank = _require(row["rank"], path, line, "rank")
        if rank in wages:
            raise ValidationError(f"{_where(path, line, 'rank')}: duplicate rank {rank!r}")
        try:
            wage = float(row["avg_yearly_wage"])
        except ValueError:
            raise ValidationError(
                f"{_where(path, line, 'avg_yearly_wage')}: not a number: {row['avg_yearly_wage']!r}"
            ) from None
        if not wage > 0:
            raise ValidationError(
                f"{_where(path, line, 'avg_yearly_wage')}: wage must be > 0, got {wage}"
            )
        wages[rank] = wage
    if not wages:
        raise ValidationError(f"{path.name}: wage table is empty")
    return wages


def _load_fields(path: Path) -> dict[str, Field]:
    fields: dict[str, Field] = {}
    for line, row in _read_rows(path, ("field_code", "discipline_area", "byline_convention")):
        code = _require(row["field_code"], path, line, "field_code")
        if code in fields:
            raise ValidationError(f"{_where(path, line, 'field_code')}: duplicate field {code!r}")
        try:
            convention = BylineConvention(row["byline_convention"])
        except ValueError:
            allowed = [c.value for c in BylineConvention]
            raise ValidationError(
                f"{_where(path, line, 'byline_convention')}: "
                f"must be one of {allowed}, got {row['byline_convention']!r}"
            ) from None
        fields[code] = Field(code, _require(row["discipline_area"], path, line, "discipline_area"), convention)
    return fields


def _load_researchers(
    path: Path, fields: dict[str, Field], wages: dict[str, float], window: Window
) -> dict[str, Researcher]:
    researchers: dict[str, Researcher] = {}
    columns = ("researcher_id", "gender", "rank", "field_code", "years_active", "affiliation_id")
    for line, row in _read_rows(path, columns):
        rid = _require(row["researcher_id"], path, line, "researcher_id")
        if rid in researchers:
            raise ValidationError(
                f"{_where(path, line, 'researcher_id')}: duplicate researcher {rid!r}"
            )
        try:
            gender = Gender(row["gender"])
        except ValueError:
            raise ValidationError(
                f"{_where(path, line, 'gender')}: must be 'F' or 'M', got {row['gender']!r}"
            ) from None
        rank = _require(row["rank"], path, line, "rank")
        if rank not in wages:
            raise ValidationError(
                f"{_where(path, line, 'rank')}: rank {rank!r} has no wage table entry"
            )
        code = _require(row["field_code"], path, line, "field_code")
        if code not in fields:
            raise ValidationError(
                f"{_where(path, line, 'field_code')}: dangling reference to field {code!r}"
            )
        years = _parse_int(row["years_active"], path, line, "years_active", minimum=1)
        if years > window.length:
            raise ValidationError(
                f"{_where(path, line, 'years_active')}: {years} exceeds window length {window.length}"
            )
        researchers[rid] = Researcher(
            rid, gender, rank, code, years, _require(row["affiliation_id"], path, line, "affiliation_id")
        )
    return researchers


def _load_publications(path: Path, window: Window) -> dict[str, Publication]:
    publications: dict[str, Publication] = {}
    columns = ("publication_id", "year", "citations", "subject_categories")
    for line, row in _read_rows(path, columns):
        pid = _require(row["publication_id"], path, line, "publication_id")
        if pid in publications:
            raise ValidationError(
                f"{_where(path, line, 'publication_id')}: duplicate publication {pid!r}"
            )
        year = _parse_int(row["year"], path, line, "year")
        if year not in window:
            raise ValidationError(
                f"{_where(path, line, 'year')}: {year} lies outside window {window}"
            )
        citations = _parse_int(row["citations"], path, line, "citations", minimum=0)
        categories = tuple(c.strip() for c in row["subject_categories"].split(";") if c.strip())
        if not categories:
            raise ValidationError(
                f"{_where(path, line, 'subject_categories')}: at least one category required"
            )
        publications[pid] = Publication(pid, year, categories, citations, byline=())
    return publications


def _load_bylines(
    path: Path, publications: dict[str, Publication], researchers: dict[str, Researcher]
) -> dict[str, Publication]:
    slots: dict[str, dict[int, BylineSlot]] = {pid: {} for pid in publications}
    columns = ("publication_id", "slot_index", "researcher_id", "affiliation_id")
    for line, row in _read_rows(path, columns):
        pid = _require(row["publication_id"], path, line, "publication_id")
        if pid not in publications:
            raise ValidationError(
                f"{_where(path, line, 'publication_id')}: dangling reference to publication {pid!r}"
            )
        index = _parse_int(row["slot_index"], path, line, "slot_index", minimum=0)
        if index in slots[pid]:
            raise ValidationError(
                f"{_where(path, line, 'slot_index')}: duplicate slot {index} for publication {pid!r}"
            )
        rid: str | None = row["researcher_id"] or None
        if rid is not None and rid not in researchers:
            raise ValidationError(
                f"{_where(path, line, 'researcher_id')}: dangling reference to researcher {rid!r}"
            )
        affiliation = _require(row["affiliation_id"], path, line, "affiliation_id")
        slots[pid][index] = BylineSlot(index, rid, affiliation)

    rebuilt: dict[str, Publication] = {}
    for pid, pub in publications.items():
        by_index = slots[pid]
        if not by_index:
            raise ValidationError(f"{path.name}: publication {pid!r} has no byline slots")
        expected = list(range(len(by_index)))
        if sorted(by_index) != expected:
            raise ValidationError(
                f"{path.name}: publication {pid!r} slot indices {sorted(by_index)} "
                f"are not contiguous from 0"
            )
        ordered = tuple(by_index[i] for i in expected)
        rebuilt[pid] = Publication(pid, pub.year, pub.subject_categories, pub.citations, ordered)
    return rebuilt


def load_corpus(corpus_dir: str | Path, window: Window) -> Corpus:
    """Load and cross-validate the five corpus CSV files from a directory.

    Raises ValidationError naming file, line and column on the first
    malformed row, dangling reference, duplicate key or non-positive wage.
    """
    directory = Path(corpus_dir)
    wages = _load_wages(directory / WAGES_FILE)
    fields = _load_fields(directory / FIELDS_FILE)
    researchers = _load_researchers(directory / RESEARCHERS_FILE, fields, wages, window)
    publications = _load_publications(directory / PUBLICATIONS_FILE, window)
    publications = _load_bylines(directory / BYLINES_FILE, publications, researchers)
    return Corpus(
        researchers=dict(sorted(researchers.items())),
        fields=dict(sorted(fields.items())),
        publications=dict(sorted(publications.items())),
        wages=dict(sorted(wages.items())),
        window=window,
    )


def save_corpus(corpus: Corpus, corpus_dir: str | Path) -> None:
    """Write a corpus back to the five CSV schemas, sorted and round-trippable."""
    directory = Path(corpus_dir)
    directory.mkdir(parents=True, exist_ok=True)

    def _write(name: str, header: list[str], rows: list[list]) -> None:
        with (directory / name).open("w", newline="", encoding="utf-8") as handle:
            writer = csv.writer(handle, lineterminator="\n")
            writer.writerow(header)
            writer.writerows(rows)

    _write(
        WAGES_FILE,
        ["rank", "avg_yearly_wage"],
        [[rank, repr(wage)] for rank, wage in sorted(corpus.wages.items())],
    )
    _write(
        FIELDS_FILE,
        ["field_code", "discipline_area", "byline_convention"],
        [[f.field_code, f.discipline_area, f.byline_convention.value]
         for f in sorted(corpus.fields.values(), key=lambda f: f.field_code)],
    )
    _write(
        RESEARCHERS_FILE,
        ["researcher_id", "gender", "rank", "field_code", "years_active", "affiliation_id"],
        [[r.researcher_id, r.gender.value, r.rank, r.field_code, r.years_active, r.affiliation_id]
         for r in sorted(corpus.researchers.values(), key=lambda r: r.researcher_id)],
    )
    pubs = sorted(corpus.publications.values(), key=lambda p: p.publication_id)
    _write(
        PUBLICATIONS_FILE,
        ["publication_id", "year", "citations", "subject_categories"],
        [[p.publication_id, p.year, p.citations, ";".join(p.subject_categories)] for p in pubs],
    )
    _write(
        BYLINES_FILE,
        ["publication_id", "slot_index", "researcher_id", "affiliation_id"],
        [[p.publication_id, s.slot_index, s.researcher_id or "", s.affiliation_id]
         for p in pubs for s in p.byline],
    )


def filter_eligible_fields(
    corpus: Corpus,
    min_productive_share: float = 0.5,
    min_per_gender: int = 30,
) -> set[str]:
    """Fields passing both filters: publication coverage and gender headcount.

    A field is eligible when at least ``min_productive_share`` of its
    researchers appear on at least one byline, and each gender counts at
    least ``min_per_gender`` members. Both comparisons are inclusive.
    """
    if not 0 <= min_productive_share <= 1:
        raise ValidationError(f"min_productive_share must be in [0,1], got {min_productive_share}")
    if min_per_gender < 0:
        raise ValidationError(f"min_per_gender must be >= 0, got {min_per_gender}")

    eligible: set[str] = set()
    for code in corpus.fields:
        members = corpus.researchers_in_field(code)
        if not members:
            continue
        n_productive = sum(1 for r in members if corpus.publications_of(r.researcher_id))
        n_female = sum(1 for r in members if r.gender is Gender.F)
        n_male = len(members) - n_female
        if (
            n_productive / len(members) >= min_productive_share
            and n_female >= min_per_gender
            and n_male >= min_per_gender
        ):
            eligible.add(code)
    return eligible


def gender_incidence_report(corpus: Corpus, group_by: str = "field") -> list[IncidenceRow]:
    """Headcount and female share per field, discipline area or rank."""
    if group_by not in ("field", "area", "rank"):
        raise ValidationError(f"group_by must be 'field', 'area' or 'rank', got {group_by!r}")

    def key(researcher: Researcher) -> str:
        if group_by == "field":
            return researcher.field_code
        if group_by == "area":
            return corpus.fields[researcher.field_code].discipline_area
        return researcher.rank

    totals: dict[str, int] = {}
    females: dict[str, int] = {}
    for researcher in corpus.researchers.values():
        group = key(researcher)
        totals[group] = totals.get(group, 0) + 1
        if researcher.gender is Gender.F:
            females[group] = females.get(group, 0) + 1
    return [
        IncidenceRow(group, totals[group], females.get(group, 0) / totals[group])
        for group in sorted(totals)
    ]
