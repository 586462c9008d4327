"""HTTP client for a CoreNLP-protocol annotation server.

Posts raw text with the ``ner,pos,lemma,depparse,coref`` annotator list and
maps the JSON reply onto :class:`AnnotatedStory`. Failures are split into
distinct, retry-aware errors so callers can tell a dead server from a
garbled reply.
"""

from __future__ import annotations

import json
from typing import Optional

import requests

from .model import (
    QUESTION,
    STATEMENT,
    AnnotatedStory,
    Block,
    CorefMention,
    DepEdge,
    Sentence,
    StoryFormatError,
    Token,
)

ANNOTATORS = "tokenize,ssplit,pos,lemma,ner,depparse,coref"

_NER_MAP = {
    "LOCATION": "location",
    "CITY": "location",
    "COUNTRY": "location",
    "PERSON": "person",
    "ORGANIZATION": "organization",
    "MONEY": "money",
    "PERCENT": "percent",
    "DATE": "date",
    "TIME": "time",
}


class AnnotatorError(Exception):
    retryable = False


class AnnotatorUnreachable(AnnotatorError):
    retryable = True


class AnnotatorTimeout(AnnotatorError):
    retryable = True


class MalformedAnnotation(AnnotatorError):
    retryable = False


def map_response(data: dict) -> AnnotatedStory:
    """CoreNLP JSON output to the annotated-story model."""
    try:
        sentences = []
        for raw in data["sentences"]:
            tokens = tuple(
                Token(
                    index=t["index"],
                    surface=t["word"],
                    lemma=t["lemma"],
                    pos=t["pos"],
                    ner=_NER_MAP.get(t.get("ner", "O"), "none"),
                )
                for t in raw["tokens"]
            )
            deps = tuple(
                DepEdge(d["dep"], d["governor"], d["dependent"])
                for d in raw["basicDependencies"]
                if d["dep"] != "punct"
            )
            sentences.append([tokens, deps, []])
        for chain in data.get("corefs", {}).values():
            representative = next(
                (m for m in chain if m.get("isRepresentativeMention")), None
            )
            if representative is None:
                continue
            canonical = representative["text"]
            for mention in chain:
                if mention["text"].lower() == canonical.lower():
                    continue  # self-reference carries no new information
                sent = sentences[mention["sentNum"] - 1]
                sent[2].append(
                    CorefMention(mention["startIndex"], mention["endIndex"] - 1, canonical)
                )
        built = [
            Sentence(tokens, deps, tuple(sorted(corefs, key=lambda m: m.start)))
            for tokens, deps, corefs in sentences
        ]
    except (KeyError, TypeError, IndexError, StoryFormatError) as exc:
        raise MalformedAnnotation(f"annotation reply does not follow the protocol: {exc}") from exc

    blocks: list[Block] = []
    question_run: list[Sentence] = []
    for sentence in built:
        is_question = any(t.surface == "?" for t in sentence.tokens[::-1][:2])
        if is_question:
            question_run.append(sentence)
            continue
        if question_run:
            blocks.append(Block(QUESTION, tuple(question_run)))
            question_run = []
        blocks.append(Block(STATEMENT, (sentence,)))
    if question_run:
        blocks.append(Block(QUESTION, tuple(question_run)))
    return AnnotatedStory(tuple(blocks))


def fetch_annotations(
    text: str,
    url: str,
    timeout: float = 60.0,
    session: Optional[requests.Session] = None,
) -> AnnotatedStory:
    """Annotate raw story text through a running annotation server."""
    if not text.strip():
        raise ValueError("cannot annotate an empty story")
    http = session or requests.Session()
    properties = json.dumps({"annotators": ANNOTATORS, "outputFormat": "json"})
    try:
        response = http.post(
            url,
            params={"properties": properties},
            data=text.encode("utf-8"),
            timeout=timeout,
        )
    except requests.Timeout as exc:
        raise AnnotatorTimeout(f"annotation server timed out after {timeout}s") from exc
    except requests.RequestException as exc:
        raise AnnotatorUnreachable(f"annotation server unreachable: {exc}") from exc
    if response.status_code != 200:
        raise AnnotatorUnreachable(
            f"annotation server answered with status {response.status_code}"
        )
    try:
        data = response.json()
    except ValueError as exc:
        raise MalformedAnnotation("annotation reply is not valid JSON") from exc
    return map_response(data)
