"""Annotated-story model and its on-disk JSON format.

A story is an ordered list of blocks, each either a single statement
sentence or a run of question sentences. Every sentence carries tokens
(surface, lemma, part-of-speech, named-entity label), a basic-dependency
tree and the coreference mentions that resolve inside it. The JSON field
names here are frozen; see docs/formats.md.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable

NER_LABELS = (
    "location",
    "person",
    "organization",
    "money",
    "percent",
    "date",
    "time",
    "none",
)

STATEMENT = "statement"
QUESTION = "question"


class StoryFormatError(ValueError):
    """Malformed annotated-story document."""


@dataclass(frozen=True)
class Token:
    index: int  # 1-based position in the sentence
    surface: str
    lemma: str
    pos: str
    ner: str = "none"

    def __post_init__(self):
        if self.ner not in NER_LABELS:
            raise StoryFormatError(f"unknown named-entity label {self.ner!r}")


@dataclass(frozen=True)
class DepEdge:
    rel: str
    governor: int  # 0 denotes the virtual root
    dependent: int


@dataclass(frozen=True)
class CorefMention:
    start: int  # inclusive 1-based token span
    end: int
    canonical: str


@dataclass(frozen=True)
class Sentence:
    tokens: tuple[Token, ...]
    deps: tuple[DepEdge, ...]
    corefs: tuple[CorefMention, ...] = ()

    def __post_init__(self):
        roots = [d for d in self.deps if d.rel == "ROOT"]
        if len(roots) != 1:
            raise StoryFormatError(
                f"a sentence needs exactly one ROOT edge, found {len(roots)}"
            )
        count = len(self.tokens)
        dependents: set[int] = set()
        for dep in self.deps:
            if not (1 <= dep.dependent <= count):
                raise StoryFormatError(f"dependency points at missing token {dep.dependent}")
            if dep.rel != "ROOT" and not (1 <= dep.governor <= count):
                raise StoryFormatError(f"dependency governed by missing token {dep.governor}")
            if dep.dependent in dependents:
                raise StoryFormatError(
                    f"token {dep.dependent} has two governors; dependencies must form a tree"
                )
            dependents.add(dep.dependent)
        # tree check: every dependent chain must reach the virtual root
        governor_of = {d.dependent: d.governor for d in self.deps}
        for start in governor_of:
            seen = set()
            node = start
            while node != 0:
                if node in seen:
                    raise StoryFormatError("dependency edges contain a cycle")
                seen.add(node)
                node = governor_of.get(node, 0)

    @property
    def root_index(self) -> int:
        return next(d.dependent for d in self.deps if d.rel == "ROOT")

    @property
    def root(self) -> Token:
        return self.tokens[self.root_index - 1]

    def token(self, index: int) -> Token:
        return self.tokens[index - 1]

    def dependents_of(self, governor: int) -> list[DepEdge]:
        return sorted(
            (d for d in self.deps if d.governor == governor and d.rel != "ROOT"),
            key=lambda d: d.dependent,
        )

    def coref_for(self, index: int) -> CorefMention | None:
        for mention in self.corefs:
            if mention.start <= index <= mention.end:
                return mention
        return None

    def text(self) -> str:
        return " ".join(t.surface for t in self.tokens)


@dataclass(frozen=True)
class Block:
    kind: str  # STATEMENT or QUESTION
    sentences: tuple[Sentence, ...]

    def __post_init__(self):
        if self.kind not in (STATEMENT, QUESTION):
            raise StoryFormatError(f"unknown block kind {self.kind!r}")
        if not self.sentences:
            raise StoryFormatError("blocks need at least one sentence")
        if self.kind == STATEMENT and len(self.sentences) != 1:
            raise StoryFormatError("statement blocks hold exactly one sentence")


@dataclass(frozen=True)
class AnnotatedStory:
    blocks: tuple[Block, ...]

    def sentences(self) -> Iterable[tuple[int, int, str, Sentence]]:
        """(block index, sentence index, kind, sentence) in document order."""
        for bi, block in enumerate(self.blocks):
            for si, sentence in enumerate(block.sentences):
                yield bi, si, block.kind, sentence


@dataclass(frozen=True)
class ConversionEntry:
    block: int
    sentence: int
    kind: str
    predicate: str
    argument_sources: tuple[str, ...]
    time: int | None
    session: int | None
    notes: tuple[str, ...] = ()

    def render(self) -> str:
        where = f"s({self.session})" if self.kind == STATEMENT else f"q({self.session})"
        note = f" [{'; '.join(self.notes)}]" if self.notes else ""
        return f"{where} {self.predicate} at {self.time}{note}"


@dataclass
class ConversionTrace:
    entries: list[ConversionEntry] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)


# -- JSON round trip ----------------------------------------------------


def story_to_json(story: AnnotatedStory) -> dict:
    return {
        "blocks": [
            {
                "kind": block.kind,
                "sentences": [
                    {
                        "tokens": [
                            {
                                "index": t.index,
                                "surface": t.surface,
                                "lemma": t.lemma,
                                "pos": t.pos,
                                "ner": t.ner,
                            }
                            for t in sentence.tokens
                        ],
                        "deps": [
                            {
                                "rel": d.rel,
                                "governor": d.governor,
                                "dependent": d.dependent,
                            }
                            for d in sentence.deps
                        ],
                        "corefs": [
                            {
                                "start": m.start,
                                "end": m.end,
                                "canonical": m.canonical,
                            }
                            for m in sentence.corefs
                        ],
                    }
                    for sentence in block.sentences
                ],
            }
            for block in story.blocks
        ]
    }


def story_from_json(data: dict) -> AnnotatedStory:
    try:
        blocks = []
        for raw_block in data["blocks"]:
            sentences = []
            for raw in raw_block["sentences"]:
                tokens = tuple(
                    Token(
                        index=t["index"],
                        surface=t["surface"],
                        lemma=t["lemma"],
                        pos=t["pos"],
                        ner=t.get("ner", "none"),
                    )
                    for t in raw["tokens"]
                )
                deps = tuple(
                    DepEdge(d["rel"], d["governor"], d["dependent"])
                    for d in raw["deps"]
                )
                corefs = tuple(
                    CorefMention(m["start"], m["end"], m["canonical"])
                    for m in raw.get("corefs", ())
                )
                sentences.append(Sentence(tokens, deps, corefs))
            blocks.append(Block(raw_block["kind"], tuple(sentences)))
        return AnnotatedStory(tuple(blocks))
    except (KeyError, TypeError) as exc:
        raise StoryFormatError(f"malformed annotated story document: {exc}") from exc


def load_story(path) -> AnnotatedStory:
    with open(path, "r", encoding="utf-8") as handle:
        return story_from_json(json.load(handle))


def dump_story(story: AnnotatedStory, path) -> None:
    with open(path, "w", encoding="utf-8") as handle:
        json.dump(story_to_json(story), handle, indent=2)
        handle.write("\n")
