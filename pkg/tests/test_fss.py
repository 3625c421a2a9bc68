"""Productivity scores: the core formula, grouping, conservation laws."""

from __future__ import annotations

import pytest
from hypothesis import given, strategies as st

from fss_rank.corpus import BylineConvention, Field, Gender
from fss_rank.credit import compute_all_shares, external_share_mass
from fss_rank.errors import DataInconsistencyError, ValidationError
from fss_rank.fss import FssScore, compute_all_fss, compute_fss
from fss_rank.impact import CitationBaseline, compute_baselines, normalized_impact

from conftest import make_corpus, publication, researcher

ALPHA_FIELD = Field("FLD/A", "AREA1", BylineConvention.ALPHABETICAL)
ORDERED_FIELD = Field("FLD/B", "AREA2", BylineConvention.CONTRIBUTION_ORDERED)


def test_no_publications_scores_zero():
    corpus = make_corpus([researcher("r1")], [ALPHA_FIELD], [])
    shares = compute_all_shares(corpus)
    baselines = CitationBaseline({})
    score = compute_fss(corpus.researchers["r1"], corpus, shares, baselines)
    assert score == FssScore("r1", 0.0, False)


def test_single_publication_arithmetic():
    # normalized impact 2.0, own share 0.5, wage 1.0, 5 years -> 0.2
    corpus = make_corpus(
        [researcher("r1", years=5, rank="assistant"), researcher("r2")],
        [ALPHA_FIELD],
        [publication("p1", year=2008, citations=10, authors=[("r1", "u1"), ("r2", "u1")])],
        wages={"assistant": 1.0},
    )
    baselines = CitationBaseline({(2008, "cat1"): 5.0})
    shares = compute_all_shares(corpus)
    score = compute_fss(corpus.researchers["r1"], corpus, shares, baselines)
    assert score.value == pytest.approx(0.2, abs=1e-12)
    assert score.productive


def _three_pub_corpus():
    members = [
        researcher("ada", "F", rank="associate", years=4, field_code="FLD/B"),
        researcher("bea", "F", rank="assistant", years=5, field_code="FLD/B"),
        researcher("carl", "M", rank="full", years=2, field_code="FLD/B"),
    ]
    pubs = [
        publication("p1", year=2006, categories=("x",), citations=6,
                    authors=[("ada", "u1"), ("bea", "u2"), ("carl", "u1")]),
        publication("p2", year=2007, categories=("x", "y"), citations=3,
                    authors=[("ada", "u1"), (None, "ext")]),
        publication("p3", year=2007, categories=("y",), citations=0,
                    authors=[("ada", "u1")]),
        publication("p4", year=2007, categories=("y",), citations=8,
                    authors=[("bea", "u2")]),
    ]
    wages = {"assistant": 1.0, "associate": 1.5, "full": 2.5}
    return make_corpus(members, [ORDERED_FIELD], pubs, wages=wages)


def test_three_publication_fixture_matches_brute_force():
    corpus = _three_pub_corpus()
    shares = compute_all_shares(corpus)
    baselines = compute_baselines(corpus)

    # independent term-by-term evaluation, hand-derived from the fixture:
    # baselines: (2006,x): {6} -> 6; (2007,x): {3} -> 3; (2007,y): {3, 8} -> 5.5
    assert baselines.get(2006, "x") == 6.0
    assert baselines.get(2007, "x") == 3.0
    assert baselines.get(2007, "y") == 5.5
    # p1: contribution-ordered, 3 authors, ends share u1 -> (0.4, 0.2, 0.4)
    # p2: 2 authors, ends differ -> fallback uniform (0.5, 0.5)
    # p3, p4: sole author -> (1.0,)
    # impacts: p1 = 6/6 = 1; p2 = mean(3/3, 3/5.5); p3 = 0; p4 = 8/5.5
    impact_p2 = (3 / 3 + 3 / 5.5) / 2
    expected_ada = (1.0 * 0.4 + impact_p2 * 0.5 + 0.0 * 1.0) / (1.5 * 4)
    expected_bea = (1.0 * 0.2 + (8 / 5.5) * 1.0) / (1.0 * 5)
    expected_carl = (1.0 * 0.4) / (2.5 * 2)

    values = {
        rid: compute_fss(corpus.researchers[rid], corpus, shares, baselines).value
        for rid in ("ada", "bea", "carl")
    }
    assert values["ada"] == pytest.approx(expected_ada, abs=1e-12)
    assert values["bea"] == pytest.approx(expected_bea, abs=1e-12)
    assert values["carl"] == pytest.approx(expected_carl, abs=1e-12)


def test_wage_doubling_halves_scores():
    corpus = _three_pub_corpus()
    shares = compute_all_shares(corpus)
    baselines = compute_baselines(corpus)
    doubled = {rank: 2 * wage for rank, wage in corpus.wages.items()}
    for rid in corpus.researchers:
        base = compute_fss(corpus.researchers[rid], corpus, shares, baselines)
        halved = compute_fss(corpus.researchers[rid], corpus, shares, baselines, wages=doubled)
        assert halved.value == pytest.approx(base.value / 2, rel=1e-12)


def test_grouping_matches_field_column():
    members = [
        researcher("r1", field_code="FLD/A"),
        researcher("r2", field_code="FLD/B"),
        researcher("r3", field_code="FLD/A"),
    ]
    corpus = make_corpus(members, [ALPHA_FIELD, ORDERED_FIELD], [])
    grouped = compute_all_fss(corpus, {}, CitationBaseline({}))
    assert set(grouped) == {"FLD/A", "FLD/B"}
    assert [s.researcher_id for s in grouped["FLD/A"]] == ["r1", "r3"]
    assert [s.researcher_id for s in grouped["FLD/B"]] == ["r2"]


def test_field_restriction():
    members = [researcher("r1", field_code="FLD/A"), researcher("r2", field_code="FLD/B")]
    corpus = make_corpus(members, [ALPHA_FIELD, ORDERED_FIELD], [])
    grouped = compute_all_fss(corpus, {}, CitationBaseline({}), fields=["FLD/B"])
    assert set(grouped) == {"FLD/B"}


def test_structure_one_field_two_researchers():
    corpus = make_corpus(
        [researcher("r1"), researcher("r2")], [ALPHA_FIELD], []
    )
    grouped = compute_all_fss(corpus, {}, CitationBaseline({}))
    assert len(grouped) == 1
    assert len(grouped["FLD/A"]) == 2


def test_missing_share_vector():
    corpus = make_corpus(
        [researcher("r1")],
        [ALPHA_FIELD],
        [publication("p1", citations=3, authors=[("r1", "u1")])],
    )
    baselines = compute_baselines(corpus)
    with pytest.raises(DataInconsistencyError, match="missing share vector"):
        compute_fss(corpus.researchers["r1"], corpus, {}, baselines)


def test_nonpositive_wage_rejected():
    corpus = make_corpus([researcher("r1")], [ALPHA_FIELD], [])
    with pytest.raises(ValidationError, match="wage"):
        compute_fss(corpus.researchers["r1"], corpus, {}, CitationBaseline({}),
                    wages={"assistant": 0.0})


def test_productive_iff_positive_cited_share():
    corpus = _three_pub_corpus()
    shares = compute_all_shares(corpus)
    baselines = compute_baselines(corpus)
    for rid, member in corpus.researchers.items():
        score = compute_fss(member, corpus, shares, baselines)
        has_cited = any(
            corpus.publications[pid].citations > 0 for pid in corpus.publications_of(rid)
        )
        assert score.productive == has_cited


@given(st.integers(1, 9))
def test_conservation_of_credit(multiplier):
    # sum over researchers of wage * years * score equals the sum over
    # publications of impact times the share mass held in-corpus.
    corpus = _three_pub_corpus()
    wages = {rank: wage * multiplier for rank, wage in corpus.wages.items()}
    shares = compute_all_shares(corpus)
    baselines = compute_baselines(corpus)
    lhs = sum(
        wages[m.rank] * m.years_active
        * compute_fss(m, corpus, shares, baselines, wages=wages).value
        for m in corpus.researchers.values()
    )
    rhs = sum(
        normalized_impact(p, baselines) * (1.0 - external_share_mass(p.byline, shares[pid]))
        for pid, p in corpus.publications.items()
    )
    assert lhs == pytest.approx(rhs, abs=1e-9)


def test_score_invariants():
    with pytest.raises(ValidationError):
        FssScore("r", -0.1, False)
    with pytest.raises(ValidationError):
        FssScore("r", 1.0, False)
    with pytest.raises(ValidationError):
        FssScore("r", 0.0, True)
