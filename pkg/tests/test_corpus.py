"""Corpus loading, validation, filters and the incidence report."""

from __future__ import annotations

import filecmp
from pathlib import Path

import pytest
from hypothesis import given, strategies as st

from fss_rank.corpus import (
    Field,
    BylineConvention,
    Gender,
    Window,
    filter_eligible_fields,
    gender_incidence_report,
    load_corpus,
    save_corpus,
)
from fss_rank.errors import ValidationError

from conftest import (
    DEFAULT_WINDOW,
    make_corpus,
    publication,
    researcher,
    write_corpus_dir,
)


def _ten_row_fixture(tmp_path: Path) -> Path:
    # 10 researchers, 2 fields, 4 publications; counts asserted against
    # the literal row counts below.
    researchers = [
        [f"r{i}", "F" if i % 2 else "M", "assistant", "FLD/A" if i < 6 else "FLD/B", 5, f"u{i % 3}"]
        for i in range(10)
    ]
    publications = [
        ["p1", 2006, 3, "cat1"],
        ["p2", 2007, 0, "cat1;cat2"],
        ["p3", 2009, 8, "cat2"],
        ["p4", 2010, 1, "cat1"],
    ]
    bylines = [
        ["p1", 0, "r0", "u0"],
        ["p1", 1, "r1", "u1"],
        ["p2", 0, "r2", "u2"],
        ["p3", 0, "r6", "u0"],
        ["p3", 1, "", "ext1"],
        ["p4", 0, "r7", "u1"],
    ]
    return write_corpus_dir(
        tmp_path / "ten",
        researchers=researchers,
        fields=[["FLD/A", "AREA1", "alphabetical"], ["FLD/B", "AREA2", "contribution_ordered"]],
        publications=publications,
        bylines=bylines,
        wages=[["assistant", 1.0], ["associate", 1.4], ["full", 2.0]],
    )


class TestWindow:
    def test_parse(self):
        assert Window.parse("2006:2010") == Window(2006, 2010)
        assert Window(2006, 2010).length == 5
        assert 2006 in Window(2006, 2010)
        assert 2011 not in Window(2006, 2010)

    @pytest.mark.parametrize("text", ["2006", "a:b", "2010:2006", "2006:2010:2011"])
    def test_bad_window(self, text):
        with pytest.raises(ValidationError):
            Window.parse(text)


class TestLoad:
    def test_counts_match_fixture(self, tmp_path):
        corpus = load_corpus(_ten_row_fixture(tmp_path), DEFAULT_WINDOW)
        counts = corpus.row_counts()
        assert counts["researchers"] == 10
        assert counts["fields"] == 2
        assert counts["publications"] == 4
        assert counts["byline_slots"] == 6
        assert counts["wages"] == 3

    def test_empty_publications_file(self, tmp_path):
        directory = write_corpus_dir(
            tmp_path / "empty",
            researchers=[
                ["r1", "F", "assistant", "FLD/A", 3, "u1"],
                ["r2", "M", "full", "FLD/A", 5, "u1"],
                ["r3", "F", "associate", "FLD/A", 1, "u2"],
            ],
            fields=[["FLD/A", "AREA1", "alphabetical"]],
            publications=[],
            bylines=[],
            wages=[["assistant", 1.0], ["associate", 1.4], ["full", 2.0]],
        )
        corpus = load_corpus(directory, DEFAULT_WINDOW)
        assert len(corpus.researchers) == 3
        assert len(corpus.publications) == 0

    def test_dangling_byline_researcher(self, tmp_path):
        directory = write_corpus_dir(
            tmp_path / "dangling",
            researchers=[["r1", "F", "assistant", "FLD/A", 5, "u1"]],
            fields=[["FLD/A", "AREA1", "alphabetical"]],
            publications=[["p1", 2008, 2, "cat1"]],
            bylines=[["p1", 0, "ghost", "u1"]],
            wages=[["assistant", 1.0]],
        )
        with pytest.raises(ValidationError, match="ghost"):
            load_corpus(directory, DEFAULT_WINDOW)

    def test_external_author_allowed(self, tiny_corpus_dir, tmp_path):
        directory = write_corpus_dir(
            tmp_path / "ext",
            researchers=[["r1", "F", "assistant", "FLD/A", 5, "u1"]],
            fields=[["FLD/A", "AREA1", "alphabetical"]],
            publications=[["p1", 2008, 2, "cat1"]],
            bylines=[["p1", 0, "r1", "u1"], ["p1", 1, "", "elsewhere"]],
            wages=[["assistant", 1.0]],
        )
        corpus = load_corpus(directory, DEFAULT_WINDOW)
        slots = corpus.publications["p1"].byline
        assert slots[1].researcher_id is None
        assert slots[1].affiliation_id == "elsewhere"

    @pytest.mark.parametrize(
        "mutation, message",
        [
            (("researchers.csv", 1, 1, "X"), "gender"),
            (("researchers.csv", 1, 3, "NOPE"), "dangling"),
            (("researchers.csv", 1, 4, "9"), "window length"),
            (("researchers.csv", 1, 4, "zero"), "integer"),
            (("publications.csv", 1, 1, "1999"), "outside window"),
            (("publications.csv", 1, 2, "-3"), ">= 0"),
            (("publications.csv", 1, 3, ";"), "category"),
            (("wages.csv", 1, 1, "0"), "> 0"),
        ],
    )
    def test_malformed_rows(self, tmp_path, mutation, message):
        directory = _ten_row_fixture(tmp_path)
        name, row, col, value = mutation
        path = directory / name
        lines = path.read_text().splitlines()
        cells = lines[row].split(",")
        cells[col] = value
        lines[row] = ",".join(cells)
        path.write_text("\n".join(lines) + "\n")
        with pytest.raises(ValidationError, match=message):
            load_corpus(directory, DEFAULT_WINDOW)

    def test_error_names_file_and_line(self, tmp_path):
        directory = _ten_row_fixture(tmp_path)
        path = directory / "researchers.csv"
        lines = path.read_text().splitlines()
        cells = lines[3].split(",")
        cells[1] = "Q"
        lines[3] = ",".join(cells)
        path.write_text("\n".join(lines) + "\n")
        with pytest.raises(ValidationError, match=r"researchers\.csv:4.*gender"):
            load_corpus(directory, DEFAULT_WINDOW)

    def test_duplicate_primary_keys(self, tmp_path):
        directory = _ten_row_fixture(tmp_path)
        path = directory / "publications.csv"
        with path.open("a") as handle:
            handle.write("p1,2008,0,cat1\n")
        with pytest.raises(ValidationError, match="duplicate"):
            load_corpus(directory, DEFAULT_WINDOW)

    def test_missing_file(self, tmp_path):
        directory = _ten_row_fixture(tmp_path)
        (directory / "wages.csv").unlink()
        with pytest.raises(ValidationError, match="missing input file"):
            load_corpus(directory, DEFAULT_WINDOW)

    def test_publication_without_byline(self, tmp_path):
        directory = _ten_row_fixture(tmp_path)
        with (directory / "publications.csv").open("a") as handle:
            handle.write("p9,2008,0,cat1\n")
        with pytest.raises(ValidationError, match="p9.*no byline"):
            load_corpus(directory, DEFAULT_WINDOW)

    def test_gapped_slot_indices(self, tmp_path):
        directory = _ten_row_fixture(tmp_path)
        with (directory / "bylines.csv").open("a") as handle:
            handle.write("p4,2,r8,u2\n")
        with pytest.raises(ValidationError, match="not contiguous"):
            load_corpus(directory, DEFAULT_WINDOW)


class TestRoundTrip:
    def test_tables_round_trip(self, tmp_path):
        first = load_corpus(_ten_row_fixture(tmp_path), DEFAULT_WINDOW)
        out1 = tmp_path / "emitted1"
        save_corpus(first, out1)
        second = load_corpus(out1, DEFAULT_WINDOW)
        assert first.researchers == second.researchers
        assert first.fields == second.fields
        assert first.publications == second.publications
        assert first.wages == second.wages

    def test_bytes_stable_after_one_normalization(self, tmp_path):
        corpus = load_corpus(_ten_row_fixture(tmp_path), DEFAULT_WINDOW)
        out1, out2 = tmp_path / "emitted1", tmp_path / "emitted2"
        save_corpus(corpus, out1)
        save_corpus(load_corpus(out1, DEFAULT_WINDOW), out2)
        for name in ("researchers.csv", "fields.csv", "publications.csv", "bylines.csv", "wages.csv"):
            assert filecmp.cmp(out1 / name, out2 / name, shallow=False), name


def _field_membership_corpus(n_f: int, n_m: int, n_productive: int):
    """One field with the given gender mix; the first n_productive members author p1."""
    total = n_f + n_m
    members = [
        researcher(f"r{i:03d}", gender="F" if i < n_f else "M", field_code="FLD/A")
        for i in range(total)
    ]
    authors = [(f"r{i:03d}", "u1") for i in range(n_productive)]
    pubs = [publication("p1", citations=1, authors=authors)] if n_productive else []
    return make_corpus(members, [Field("FLD/A", "AREA1", BylineConvention.ALPHABETICAL)], pubs)


class TestEligibility:
    def test_low_productive_share_excluded(self):
        # 4 of 10 productive -> 40% < 50%
        corpus = _field_membership_corpus(5, 5, 4)
        assert filter_eligible_fields(corpus, 0.5, 0) == set()

    def test_gender_floor_excluded(self):
        corpus = _field_membership_corpus(29, 200, 229)
        assert filter_eligible_fields(corpus, 0.5, 30) == set()

    def test_both_thresholds_met(self):
        # 31 of 60 productive (51.7%), 30 per gender: both predicates hold.
        corpus = _field_membership_corpus(30, 30, 31)
        n_members = len(corpus.researchers)
        n_productive = sum(
            1 for r in corpus.researchers.values() if corpus.publications_of(r.researcher_id)
        )
        n_f = sum(1 for r in corpus.researchers.values() if r.gender is Gender.F)
        assert n_productive / n_members >= 0.5 and n_f >= 30 and (n_members - n_f) >= 30
        assert filter_eligible_fields(corpus, 0.5, 30) == {"FLD/A"}

    def test_exact_share_boundary_inclusive(self):
        corpus = _field_membership_corpus(2, 2, 2)
        assert filter_eligible_fields(corpus, 0.5, 1) == {"FLD/A"}

    @given(
        n_f=st.integers(0, 8),
        n_m=st.integers(0, 8),
        productive=st.integers(0, 16),
        share1=st.floats(0, 1),
        share2=st.floats(0, 1),
        floor1=st.integers(0, 10),
        floor2=st.integers(0, 10),
    )
    def test_filter_monotone_in_thresholds(self, n_f, n_m, productive, share1, share2, floor1, floor2):
        if n_f + n_m == 0:
            return
        productive = min(productive, n_f + n_m)
        corpus = _field_membership_corpus(n_f, n_m, productive)
        lo = filter_eligible_fields(corpus, min(share1, share2), min(floor1, floor2))
        hi = filter_eligible_fields(corpus, max(share1, share2), max(floor1, floor2))
        assert hi <= lo

    def test_bad_thresholds(self):
        corpus = _field_membership_corpus(1, 1, 2)
        with pytest.raises(ValidationError):
            filter_eligible_fields(corpus, 1.5, 0)
        with pytest.raises(ValidationError):
            filter_eligible_fields(corpus, 0.5, -1)


class TestIncidence:
    def _mixed_corpus(self):
        fields = [
            Field("FLD/A", "AREA1", BylineConvention.ALPHABETICAL),
            Field("FLD/B", "AREA2", BylineConvention.ALPHABETICAL),
        ]
        members = [
            researcher("r1", "M", rank="full", field_code="FLD/A"),
            researcher("r2", "M", rank="full", field_code="FLD/A"),
            researcher("r3", "F", rank="assistant", field_code="FLD/A"),
            researcher("r4", "F", rank="assistant", field_code="FLD/B"),
            researcher("r5", "F", rank="associate", field_code="FLD/B"),
            researcher("r6", "M", rank="assistant", field_code="FLD/B"),
        ]
        return make_corpus(members, fields, [])

    def test_all_male_group(self):
        corpus = make_corpus(
            [researcher(f"r{i}", "M") for i in range(5)],
            [Field("FLD/A", "AREA1", BylineConvention.ALPHABETICAL)],
            [],
        )
        (row,) = gender_incidence_report(corpus, "field")
        assert row.headcount == 5 and row.female_share == 0.0

    def test_even_split(self):
        corpus = make_corpus(
            [researcher(f"r{i}", "F" if i < 3 else "M") for i in range(6)],
            [Field("FLD/A", "AREA1", BylineConvention.ALPHABETICAL)],
            [],
        )
        (row,) = gender_incidence_report(corpus, "field")
        assert row.female_share == 0.5

    def test_rank_groups_match_hand_tally(self):
        # hand tally of the fixture: assistant 2F+1M, associate 1F, full 2M
        report = {row.group: row for row in gender_incidence_report(self._mixed_corpus(), "rank")}
        assert report["assistant"].headcount == 3
        assert report["assistant"].female_share == pytest.approx(2 / 3)
        assert report["associate"].headcount == 1
        assert report["associate"].female_share == 1.0
        assert report["full"].headcount == 2
        assert report["full"].female_share == 0.0

    def test_area_groups(self):
        report = {row.group: row for row in gender_incidence_report(self._mixed_corpus(), "area")}
        assert report["AREA1"].headcount == 3
        assert report["AREA2"].female_share == pytest.approx(2 / 3)

    def test_counts_sum(self):
        corpus = self._mixed_corpus()
        for by in ("field", "area", "rank"):
            rows = gender_incidence_report(corpus, by)
            assert sum(r.headcount for r in rows) == len(corpus.researchers)
            for row in rows:
                females = round(row.female_share * row.headcount)
                assert 0 <= females <= row.headcount

    def test_bad_group_by(self):
        with pytest.raises(ValidationError):
            gender_incidence_report(self._mixed_corpus(), "university")
