import random

import pytest

from starlang.core import At, canonical_text
from starlang.parser import format_domain, parse_domain, parse_story_only, parse_term

from domain_gen import random_domain


def test_phone_domain_counts(phone_domain):
    assert len(phone_domain.sessions) == 4
    assert len(phone_domain.statements) == 10
    assert len(phone_domain.questions) == 4
    assert len(phone_domain.fluents) == 6
    assert len(phone_domain.rules) == 7
    assert len(phone_domain.priorities) == 1


def test_empty_source_is_empty_domain():
    result = parse_domain("")
    assert result.domain is not None
    assert result.diagnostics == []
    assert result.domain.sessions == ()
    assert result.domain.rules == ()


def test_whitespace_only_story_is_empty():
    result = parse_story_only("   \n\t  \n")
    assert result.domain is not None
    assert result.domain.statements == ()


def test_two_head_literals_is_an_error():
    result = parse_domain("c(01) :: a causes b, c.")
    assert result.domain is None
    assert any("exactly one head literal" in d.message for d in result.errors())


def test_every_error_diagnostic_has_a_hint():
    bad_sources = [
        "c(01) :: a causes b, c.",
        "s(5) :: a at 3.",
        "session(s(0),[q(9)],all).",
        "c(01) :: a causes b. c(01) :: a causes d.",
        "c(01) >> c(01).",
        "wibble!",
        "q(1) ?? a at always.",
        "s(0) :: a at 3. session(s(0),[],all).",
        "fluents([f(_,_)]). fluents([f(_,_)]).",
    ]
    for source in bad_sources:
        result = parse_domain(source)
        errors = result.errors()
        assert errors, source
        assert all(d.hint for d in errors), source


def test_diagnostic_position_is_accurate():
    result = parse_domain("session(s(0),[],all).\nc(01) :: a causes b, c.\n")
    error = result.errors()[0]
    assert error.line == 2
    assert error.column == 20


def test_comments_are_accepted_and_discarded():
    source = "% a comment line\nsession(s(0),[],all). % trailing\n"
    result = parse_domain(source)
    assert result.domain is not None
    assert "%" not in format_domain(result.domain)


def test_multiline_rule_bodies(phone_knowledge_text):
    result = parse_domain(phone_knowledge_text)
    assert result.domain is not None
    wide = next(r for r in result.domain.rules if r.label.index == 31)
    assert len(wide.body) == 5


def test_story_only_rejects_knowledge_clauses(phone_story_text, phone_knowledge_text):
    assert parse_story_only(phone_story_text).domain is not None
    result = parse_story_only(phone_knowledge_text)
    assert result.domain is None
    assert any("story pane" in d.message for d in result.errors())


def test_story_only_rejects_rules():
    result = parse_story_only("c(01) :: a causes b.")
    assert result.domain is None
    assert any("background-knowledge clause" in d.message for d in result.errors())


def test_label_connective_mismatch_is_an_error():
    result = parse_domain("c(01) :: a implies b.")
    assert result.domain is None


def test_priority_between_property_rules_parses():
    source = "p(01) :: a implies b.\np(02) :: c implies d.\np(01) >> p(02).\n"
    result = parse_domain(source)
    assert result.domain is not None
    assert len(result.domain.priorities) == 1


def test_format_parse_format_is_stable(phone_domain):
    once = format_domain(phone_domain)
    again = parse_domain(once)
    assert again.domain == phone_domain
    assert format_domain(again.domain) == once


def test_single_priority_formats_to_one_line():
    source = "c(41) :: a causes b.\nc(42) :: c causes d.\nc(42) >> c(41).\n"
    domain = parse_domain(source).domain
    assert "c(42) >> c(41)." in format_domain(domain).splitlines()


def test_statement_order_is_preserved(phone_domain):
    timed = [s for s in phone_domain.statements if s.session != 0]
    assert [(s.session, s.when.t) for s in timed] == [
        (1, 6),
        (2, 12),  # document order, not time order
        (2, 2),
        (2, 4),
        (3, 16),
        (3, 18),
    ]


def test_parse_term_helper():
    term = parse_term("do(favor1)")
    assert canonical_text(term) == "do(favor1)"
    with pytest.raises(ValueError):
        parse_term("do(favor1) extra")


def test_randomized_round_trip_sample():
    rng = random.Random(20240811)
    for _ in range(25):
        domain = random_domain(rng)
        first = format_domain(domain)
        parsed = parse_domain(first)
        assert parsed.domain == domain, first
        assert format_domain(parsed.domain) == first
