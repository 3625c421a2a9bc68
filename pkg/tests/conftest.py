"""Shared fixture builders: in-memory corpora and on-disk CSV corpora."""

from __future__ import annotations

import csv
from pathlib import Path

import pytest

from fss_rank.corpus import (
    BylineConvention,
    BylineSlot,
    Corpus,
    Field,
    Gender,
    Publication,
    Researcher,
    Window,
)

DEFAULT_WINDOW = Window(2006, 2010)

DEFAULT_WAGES = {"assistant": 1.0, "associate": 1.4, "full": 2.0}


def make_corpus(
    researchers: list[Researcher],
    fields: list[Field],
    publications: list[Publication],
    wages: dict[str, float] | None = None,
    window: Window = DEFAULT_WINDOW,
) -> Corpus:
    """Assemble an in-memory corpus without touching the filesystem."""
    return Corpus(
        researchers={r.researcher_id: r for r in sorted(researchers, key=lambda r: r.researcher_id)},
        fields={f.field_code: f for f in sorted(fields, key=lambda f: f.field_code)},
        publications={
            p.publication_id: p for p in sorted(publications, key=lambda p: p.publication_id)
        },
        wages=dict(wages or DEFAULT_WAGES),
        window=window,
    )


def researcher(
    rid: str,
    gender: str = "F",
    rank: str = "assistant",
    field_code: str = "FLD/A",
    years: int = 5,
    affiliation: str = "uni1",
) -> Researcher:
    return Researcher(rid, Gender(gender), rank, field_code, years, affiliation)


def publication(
    pid: str,
    year: int = 2008,
    categories: tuple[str, ...] = ("cat1",),
    citations: int = 0,
    authors: list[tuple[str | None, str]] | None = None,
) -> Publication:
    """authors: list of (researcher_id or None, affiliation_id) in byline order."""
    authors = authors or [("r1", "uni1")]
    byline = tuple(
        BylineSlot(i, rid, affiliation) for i, (rid, affiliation) in enumerate(authors)
    )
    return Publication(pid, year, tuple(categories), citations, byline)


def write_corpus_dir(
    directory: Path,
    researchers: list[list],
    fields: list[list],
    publications: list[list],
    bylines: list[list],
    wages: list[list],
) -> Path:
    """Write raw rows to the five corpus CSV files under ``directory``."""
    directory.mkdir(parents=True, exist_ok=True)
    tables = {
        "researchers.csv": (
            ["researcher_id", "gender", "rank", "field_code", "years_active", "affiliation_id"],
            researchers,
        ),
        "fields.csv": (["field_code", "discipline_area", "byline_convention"], fields),
        "publications.csv": (
            ["publication_id", "year", "citations", "subject_categories"],
            publications,
        ),
        "bylines.csv": (
            ["publication_id", "slot_index", "researcher_id", "affiliation_id"],
            bylines,
        ),
        "wages.csv": (["rank", "avg_yearly_wage"], wages),
    }
    for name, (header, rows) in tables.items():
        with (directory / name).open("w", newline="", encoding="utf-8") as handle:
            writer = csv.writer(handle, lineterminator="\n")
            writer.writerow(header)
            writer.writerows(rows)
    return directory


@pytest.fixture
def tiny_corpus_dir(tmp_path: Path) -> Path:
    """Two researchers, one field, two publications; smallest useful corpus."""
    return write_corpus_dir(
        tmp_path / "tiny",
        researchers=[
            ["r1", "F", "assistant", "FLD/A", 5, "uni1"],
            ["r2", "M", "assistant", "FLD/A", 5, "uni2"],
        ],
        fields=[["FLD/A", "AREA1", "alphabetical"]],
        publications=[
            ["p1", 2007, 4, "cat1"],
            ["p2", 2008, 2, "cat1"],
        ],
        bylines=[
            ["p1", 0, "r1", "uni1"],
            ["p1", 1, "r2", "uni2"],
            ["p2", 0, "r2", "uni2"],
        ],
        wages=[["assistant", 1.0], ["associate", 1.4], ["full", 2.0]],
    )
