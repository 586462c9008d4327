import json
from importlib import resources

import pytest
import requests

from starlang.core import canonical_text
from starlang.nl2star import (
    AnnotatorTimeout,
    AnnotatorUnreachable,
    ConversionError,
    MalformedAnnotation,
    QUESTION,
    STATEMENT,
    AnnotatedStory,
    Block,
    assign_timepoints,
    build_predicate,
    convert,
    extract_entities,
    fetch_annotations,
    is_past_perfect,
    load_story,
    map_response,
    segment_sessions,
    story_from_json,
    story_to_json,
)
from starlang.parser import format_domain, parse_domain


@pytest.fixture(scope="module")
def phone_story():
    with resources.as_file(resources.files("starlang.data") / "phone_annotations.json") as path:
        return load_story(path)


@pytest.fixture(scope="module")
def annotator_reply():
    return json.loads(
        (resources.files("starlang.data") / "phone_annotator_reply.json").read_text()
    )


def sentence_texts(block):
    return [s.text() for s in block.sentences]


def test_segmentation_follows_question_blocks(phone_story):
    plans = segment_sessions(phone_story)
    assert len(plans) == 3
    assert [len(p.statements) for p in plans] == [1, 3, 2]
    assert [len(p.questions) for p in plans] == [2, 1, 1]


def test_only_questions_is_an_error(phone_story):
    question_block = next(b for b in phone_story.blocks if b.kind == QUESTION)
    with pytest.raises(ConversionError, match="no statements precede"):
        segment_sessions(AnnotatedStory((question_block,)))


def test_empty_story_is_an_error():
    with pytest.raises(ConversionError, match="empty"):
        segment_sessions(AnnotatedStory(()))


def test_trailing_statements_form_a_questionless_session(phone_story):
    trimmed = AnnotatedStory(phone_story.blocks[:-1])
    plans = segment_sessions(trimmed)
    assert len(plans) == 3
    assert plans[-1].questions == []


def test_alternating_statements_and_questions():
    # two statement/question rounds give two question-bearing sessions
    src = load_fixture_blocks()
    blocks = [src["s1"], src["q"], src["s5"], src["q"]]
    plans = segment_sessions(AnnotatedStory(tuple(blocks)))
    assert len(plans) == 2
    assert all(len(p.questions) == 1 for p in plans)


def load_fixture_blocks():
    data = json.loads(
        (resources.files("starlang.data") / "phone_annotations.json").read_text()
    )
    story = story_from_json(data)
    return {
        "s1": story.blocks[0],
        "q": Block(QUESTION, (story.blocks[1].sentences[0],)),
        "s5": story.blocks[6],
    }


def test_entity_extraction_matches_the_reference(phone_story):
    typing, table = extract_entities(phone_story)
    assert [canonical_text(s) for s in typing] == [
        "s(0) :: is_favor(favor1) at always.",
        "s(0) :: is_person(bob) at always.",
        "s(0) :: is_person(mary) at always.",
        "s(0) :: is_phone(phone1) at always.",
    ]
    assert table.lemma_constants == {"phone": "phone1", "favor": "favor1"}


def test_unresolved_pronoun_falls_back_to_numbered_person(phone_story):
    block = phone_story.blocks[2]  # she did not want ...
    sentence = block.sentences[0]
    stripped = sentence.__class__(sentence.tokens, sentence.deps, ())
    story = AnnotatedStory((Block(STATEMENT, (stripped,)), phone_story.blocks[1]))
    typing, table = extract_entities(story)
    assert any("is_person(person1)" in canonical_text(s) for s in typing)


def test_sentence_with_no_nouns_produces_no_typing():
    data = {
        "blocks": [
            {
                "kind": "statement",
                "sentences": [
                    {
                        "tokens": [
                            {"index": 1, "surface": "It", "lemma": "it", "pos": "PRP"},
                            {"index": 2, "surface": "rained", "lemma": "rain", "pos": "VBD"},
                        ],
                        "deps": [
                            {"rel": "ROOT", "governor": 0, "dependent": 2},
                            {"rel": "nsubj", "governor": 2, "dependent": 1},
                        ],
                        "corefs": [],
                    }
                ],
            }
        ]
    }
    story = story_from_json(data)
    typing, table = extract_entities(story)
    # the dangling pronoun is typed as a person; no noun constants appear
    assert table.lemma_constants == {}
    assert len(typing) == 1


def test_predicate_for_agreement_sentence(phone_story):
    _, table = extract_entities(phone_story)
    sentence = phone_story.blocks[4].sentences[0]  # she had agreed to do the favor
    literal, sources, notes = build_predicate(sentence, table, (4, 0))
    assert canonical_text(literal) == "have_agreed(mary,do(favor1))"
    assert "nsubj" in sources and "xcomp" in sources


def test_predicate_for_negated_want(phone_story):
    _, table = extract_entities(phone_story)
    sentence = phone_story.blocks[2].sentences[0]
    literal, _, _ = build_predicate(sentence, table, (2, 0))
    assert canonical_text(literal) == "-do_want(mary,answer(phone1))"


def test_predicate_for_plain_call(phone_story):
    _, table = extract_entities(phone_story)
    sentence = phone_story.blocks[0].sentences[0]
    literal, _, _ = build_predicate(sentence, table, (0, 0))
    assert canonical_text(literal) == "call(bob,mary,phone1)"


def test_copular_question_prefixes_is(phone_story):
    _, table = extract_entities(phone_story)
    sentence = phone_story.blocks[1].sentences[0]
    literal, _, _ = build_predicate(sentence, table, (1, 0))
    assert canonical_text(literal) == "is_embarrassed(mary)"


def test_past_perfect_detection(phone_story):
    flags = [
        (block.sentences[0].text(), is_past_perfect(block.sentences[0]))
        for block in phone_story.blocks
        if block.kind == STATEMENT
    ]
    assert [f for _, f in flags] == [False, False, True, True, False, False]


def test_time_assignment_matches_the_reference(phone_story):
    times = assign_timepoints(phone_story)
    by_block = {bi: t for (bi, si), t in times.items() if si == 0}
    # past-perfect statements first (2, 4), then document order from 6
    assert by_block[3] == 2 and by_block[4] == 4
    assert by_block[0] == 6 and by_block[2] == 12
    assert by_block[6] == 16 and by_block[7] == 18
    assert times[(1, 0)] == 8 and times[(1, 1)] == 10
    assert times[(5, 0)] == 14 and times[(8, 0)] == 20


def test_single_statement_takes_time_two():
    story = AnnotatedStory((load_fixture_blocks()["s1"],))
    times = assign_timepoints(story)
    assert list(times.values()) == [2]


def test_two_past_perfect_statements_take_two_and_four(phone_story):
    story = AnnotatedStory((phone_story.blocks[3], phone_story.blocks[4]))
    times = assign_timepoints(story)
    assert sorted(times.values()) == [2, 4]


def test_conversion_reproduces_the_reference_story(phone_story, phone_story_text):
    domain, trace = convert(phone_story)
    assert domain == parse_domain(phone_story_text).domain
    assert len(trace.entries) == 10  # one per sentence
    assert "".join(format_domain(domain).split()) == "".join(phone_story_text.split())


def test_conversion_is_deterministic(phone_story):
    first, _ = convert(phone_story)
    second, _ = convert(phone_story)
    assert format_domain(first) == format_domain(second)


def test_time_points_strictly_increase_without_duplicates(phone_story):
    times = list(assign_timepoints(phone_story).values())
    assert len(times) == len(set(times))
    assert all(t % 2 == 0 and t >= 2 for t in times)


def test_minimal_statement_question_story():
    blocks = load_fixture_blocks()
    story = AnnotatedStory((blocks["s5"], blocks["q"]))
    domain, _ = convert(story)
    assert len(domain.sessions) == 2
    assert domain.sessions[1].questions == (1,)
    timed = [s for s in domain.statements if s.session == 1]
    assert len(timed) == 1 and timed[0].when.t == 2
    assert domain.questions[0].choices[0][1].t == 4


def test_json_round_trip(phone_story):
    assert story_from_json(story_to_json(phone_story)) == phone_story


# -- annotation client ----------------------------------------------------


class FakeResponse:
    def __init__(self, status_code=200, payload=None, text=""):
        self.status_code = status_code
        self._payload = payload
        self.text = text

    def json(self):
        if self._payload is None:
            raise ValueError("not json")
        return self._payload


class FakeSession:
    def __init__(self, response=None, error=None):
        self.response = response
        self.error = error
        self.calls = []

    def post(self, url, params=None, data=None, timeout=None):
        self.calls.append({"url": url, "params": params, "data": data})
        if self.error is not None:
            raise self.error
        return self.response


def test_recorded_reply_maps_to_the_fixture(phone_story, annotator_reply):
    assert map_response(annotator_reply) == phone_story


def test_fetch_annotations_posts_the_annotator_list(annotator_reply, phone_story):
    session = FakeSession(response=FakeResponse(payload=annotator_reply))
    story = fetch_annotations("Bob called Mary.", "http://annotator:9000", session=session)
    assert story == phone_story
    sent = json.loads(session.calls[0]["params"]["properties"])
    assert "depparse" in sent["annotators"] and "coref" in sent["annotators"]


def test_empty_text_is_rejected_before_any_request():
    session = FakeSession()
    with pytest.raises(ValueError, match="empty"):
        fetch_annotations("   ", "http://annotator:9000", session=session)
    assert session.calls == []


def test_unreachable_and_timeout_are_distinct_and_retryable():
    down = FakeSession(error=requests.ConnectionError("refused"))
    with pytest.raises(AnnotatorUnreachable) as unreachable:
        fetch_annotations("text", "http://annotator:9000", session=down)
    assert unreachable.value.retryable
    slow = FakeSession(error=requests.Timeout("slow"))
    with pytest.raises(AnnotatorTimeout) as timeout:
        fetch_annotations("text", "http://annotator:9000", session=slow)
    assert timeout.value.retryable


def test_truncated_reply_is_malformed_not_retryable(annotator_reply):
    broken = json.loads(json.dumps(annotator_reply))
    del broken["sentences"][0]["basicDependencies"]
    session = FakeSession(response=FakeResponse(payload=broken))
    with pytest.raises(MalformedAnnotation) as malformed:
        fetch_annotations("text", "http://annotator:9000", session=session)
    assert not malformed.value.retryable


def test_non_json_reply_is_malformed():
    session = FakeSession(response=FakeResponse(payload=None, text="<html>"))
    with pytest.raises(MalformedAnnotation):
        fetch_annotations("text", "http://annotator:9000", session=session)


def test_http_error_status_is_unreachable():
    session = FakeSession(response=FakeResponse(status_code=503))
    with pytest.raises(AnnotatorUnreachable):
        fetch_annotations("text", "http://annotator:9000", session=session)
