"""Deterministic annotated-story to STAR conversion.

The pipeline: segment the blocks into question-terminated sessions, mine
constants and their typing statements from entities and common nouns,
build one predicate per sentence from its dependency tree, then assign
even time-points (past-perfect statements first, everything else after).
Identical annotations always produce identical STAR text.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from ..core import (
    ALWAYS,
    At,
    Compound,
    Constant,
    Domain,
    Literal,
    Question,
    SessionDecl,
    StoryStatement,
    Term,
    canonical_text,
)
from .model import (
    QUESTION,
    STATEMENT,
    AnnotatedStory,
    Block,
    ConversionEntry,
    ConversionTrace,
    Sentence,
    Token,
)


class ConversionError(ValueError):
    """The story cannot be converted; the message names the offending part."""


ARGUMENT_RELS = ("nsubj", "nsubjpass", "dobj", "iobj", "nmod", "nmod:poss")
PREFIX_RELS = ("aux", "auxpass", "aux:pass", "cop", "compound:prt")
SUFFIX_RELS = ("amod", "case")
_SILENT_RELS = {"det", "mark", "punct", "expl", "advmod"}
_NOUN_TAGS = {"NN", "NNS"}
_PRONOUN_TAGS = {"PRP", "PRP$"}


def _is_argument_rel(rel: str) -> bool:
    return rel in ARGUMENT_RELS or rel.startswith("nmod:")


@dataclass
class SessionPlan:
    """One reading session: its statement sentences and question sentences."""

    statements: list[tuple[int, int, Sentence]] = field(default_factory=list)
    questions: list[tuple[int, int, Sentence]] = field(default_factory=list)


def segment_sessions(story: AnnotatedStory) -> list[SessionPlan]:
    """Split blocks into sessions; each ends at a question block."""
    if not story.blocks:
        raise ConversionError("the story is empty")
    plans: list[SessionPlan] = []
    pending: list[tuple[int, int, Sentence]] = []
    for bi, block in enumerate(story.blocks):
        if block.kind == STATEMENT:
            pending.append((bi, 0, block.sentences[0]))
            continue
        if not pending:
            raise ConversionError("no statements precede questions")
        plan = SessionPlan(statements=pending)
        for si, sentence in enumerate(block.sentences):
            plan.questions.append((bi, si, sentence))
        plans.append(plan)
        pending = []
    if pending:
        plans.append(SessionPlan(statements=pending))
    return plans


@dataclass
class EntityTable:
    """Constants discovered in the story plus their typing statements."""

    constants: dict[str, str] = field(default_factory=dict)  # constant -> type name
    by_surface: dict[str, str] = field(default_factory=dict)  # lowercased text -> constant
    by_position: dict[tuple[int, int, int], str] = field(default_factory=dict)
    lemma_constants: dict[str, str] = field(default_factory=dict)
    person_counter: int = 0

    def typing_statements(self) -> list[StoryStatement]:
        statements = [
            StoryStatement(
                0,
                Literal(True, f"is_{tname}", (Constant(constant),)),
                ALWAYS,
            )
            for constant, tname in self.constants.items()
        ]
        statements.sort(key=canonical_text)
        return statements

    def add(self, constant: str, type_name: str, surface: str) -> str:
        self.constants.setdefault(constant, type_name)
        self.by_surface.setdefault(surface.lower(), constant)
        return constant

    def constant_at(self, position: tuple[int, int, int]) -> str | None:
        return self.by_position.get(position)


def extract_entities(story: AnnotatedStory) -> tuple[list[StoryStatement], EntityTable]:
    """Typing statements for the base session plus the constant table.

    Named entities keep their (lowercased) name, common nouns get a
    per-lemma numbered constant, and pronouns resolve through coreference;
    an unresolvable pronoun falls back to a fresh numbered person constant.
    """
    table = EntityTable()
    trace_notes: list[str] = []
    for bi, si, _, sentence in story.sentences():
        i = 0
        tokens = sentence.tokens
        while i < len(tokens):
            token = tokens[i]
            if token.ner != "none":
                run = [token]
                while i + 1 < len(tokens) and tokens[i + 1].ner == token.ner:
                    i += 1
                    run.append(tokens[i])
                name = "_".join(t.surface.lower() for t in run)
                constant = table.add(name, token.ner, " ".join(t.surface for t in run))
                for t in run:
                    table.by_position[(bi, si, t.index)] = constant
            elif token.pos in _NOUN_TAGS:
                lemma = token.lemma.lower()
                constant = table.lemma_constants.get(lemma)
                if constant is None:
                    constant = f"{lemma}1"
                    table.lemma_constants[lemma] = constant
                    table.add(constant, lemma, token.surface)
                table.by_position[(bi, si, token.index)] = constant
            i += 1
    # pronouns resolve after every named constant is known
    for bi, si, _, sentence in story.sentences():
        for token in sentence.tokens:
            if token.pos not in _PRONOUN_TAGS:
                continue
            mention = sentence.coref_for(token.index)
            if mention is not None:
                constant = table.by_surface.get(mention.canonical.lower())
                if constant is None:
                    constant = table.add(
                        mention.canonical.lower(), "person", mention.canonical
                    )
            else:
                table.person_counter += 1
                constant = table.add(
                    f"person{table.person_counter}", "person", token.surface
                )
                trace_notes.append(
                    f"unresolved pronoun {token.surface!r} became {constant}"
                )
            table.by_position[(bi, si, token.index)] = constant
    table.notes = trace_notes  # type: ignore[attr-defined]
    return table.typing_statements(), table


def _resolve_term(
    sentence: Sentence,
    token: Token,
    table: EntityTable,
    position: tuple[int, int],
    sources: list[str],
    notes: list[str],
    rel: str,
) -> Term:
    nested = [
        d for d in sentence.dependents_of(token.index) if d.rel == "xcomp"
    ]
    constant = table.constant_at((position[0], position[1], token.index))
    if constant is None:
        constant = token.lemma.lower()
        notes.append(f"no constant for {token.surface!r}; used its lemma")
    sources.append(rel)
    if nested:
        # a clause argument becomes a nested predicate over its own arguments
        inner = _build_nested(sentence, sentence.token(nested[0].dependent), table, position, sources, notes)
        return inner
    return Constant(constant)


def _build_nested(
    sentence: Sentence,
    head: Token,
    table: EntityTable,
    position: tuple[int, int],
    sources: list[str],
    notes: list[str],
) -> Term:
    args: list[Term] = []
    for dep in sentence.dependents_of(head.index):
        if _is_argument_rel(dep.rel):
            args.append(
                _resolve_term(
                    sentence,
                    sentence.token(dep.dependent),
                    table,
                    position,
                    sources,
                    notes,
                    f"{dep.rel}<xcomp",
                )
            )
        elif dep.rel == "xcomp":
            args.append(
                _build_nested(
                    sentence, sentence.token(dep.dependent), table, position, sources, notes
                )
            )
        elif dep.rel not in _SILENT_RELS and dep.rel not in PREFIX_RELS:
            notes.append(f"ignored relation {dep.rel!r} under {head.surface!r}")
    name = head.lemma.lower()
    if not args:
        return Constant(name)
    return Compound(name, tuple(args))


def build_predicate(
    sentence: Sentence,
    table: EntityTable,
    position: tuple[int, int] = (0, 0),
) -> tuple[Literal, tuple[str, ...], tuple[str, ...]]:
    """Predicate for one sentence: (literal, argument sources, notes)."""
    root = sentence.root
    notes: list[str] = []
    sources: list[str] = []
    name = root.lemma.lower()
    positive = True
    prefixes: list[str] = []
    suffixes: list[str] = []
    args: list[tuple[int, Term]] = []
    for dep in sentence.dependents_of(root.index):
        token = sentence.token(dep.dependent)
        if dep.rel == "neg":
            positive = False
        elif dep.rel in PREFIX_RELS:
            word = token.lemma.lower()
            prefixes.append("is" if word == "be" else word)
        elif dep.rel in SUFFIX_RELS:
            suffixes.append(token.lemma.lower())
        elif dep.rel == "xcomp":
            term = _build_nested(sentence, token, table, position, sources, notes)
            sources.append("xcomp")
            args.append((dep.dependent, term))
        elif _is_argument_rel(dep.rel):
            term = _resolve_term(sentence, token, table, position, sources, notes, dep.rel)
            args.append((dep.dependent, term))
        elif dep.rel not in _SILENT_RELS:
            notes.append(f"ignored relation {dep.rel!r}")
    for prefix in reversed(prefixes):
        name = f"{prefix}_{name}"
    for suffix in suffixes:
        name = f"{name}_{suffix}"
    if not args:
        notes.append("no consumable dependents; built a zero-argument predicate")
    ordered = tuple(term for _, term in sorted(args, key=lambda pair: pair[0]))
    return Literal(positive, name, ordered), tuple(sources), tuple(notes)


def is_past_perfect(sentence: Sentence) -> bool:
    root = sentence.root
    for dep in sentence.dependents_of(root.index):
        if dep.rel in ("aux", "auxpass", "aux:pass"):
            token = sentence.token(dep.dependent)
            if token.lemma.lower() == "have" and token.pos == "VBD":
                return True
    return False


def assign_timepoints(story: AnnotatedStory) -> dict[tuple[int, int], int]:
    """Map (block, sentence) positions to their story time-points.

    Past-perfect statements take 2, 4, ... in document order; all other
    statements and the questions continue from there, also stepping by two.
    """
    past_perfect: list[tuple[int, int]] = []
    remaining: list[tuple[int, int]] = []
    for bi, si, kind, sentence in story.sentences():
        if kind == STATEMENT and is_past_perfect(sentence):
            past_perfect.append((bi, si))
        else:
            remaining.append((bi, si))
    assignment: dict[tuple[int, int], int] = {}
    clock = 0
    for position in past_perfect:
        clock += 2
        assignment[position] = clock
    for position in remaining:
        clock += 2
        assignment[position] = clock
    return assignment


def convert(story: AnnotatedStory) -> tuple[Domain, ConversionTrace]:
    """Whole-story conversion to a STAR domain fragment (no knowledge)."""
    plans = segment_sessions(story)
    typing, table = extract_entities(story)
    times = assign_timepoints(story)
    trace = ConversionTrace()
    trace.notes.extend(getattr(table, "notes", []))

    statements: list[StoryStatement] = list(typing)
    questions: list[Question] = []
    sessions: list[SessionDecl] = [SessionDecl(0, (), "all")]
    question_counter = 0
    for number, plan in enumerate(plans, start=1):
        qids: list[int] = []
        for bi, si, sentence in plan.statements:
            literal, sources, notes = build_predicate(sentence, table, (bi, si))
            when = times[(bi, si)]
            statements.append(StoryStatement(number, literal, At(when)))
            trace.entries.append(
                ConversionEntry(
                    bi, si, STATEMENT, canonical_text(literal), sources, when, number, notes
                )
            )
        for bi, si, sentence in plan.questions:
            question_counter += 1
            literal, sources, notes = build_predicate(sentence, table, (bi, si))
            when = times[(bi, si)]
            questions.append(Question(question_counter, ((literal, At(when)),)))
            qids.append(question_counter)
            trace.entries.append(
                ConversionEntry(
                    bi, si, QUESTION, canonical_text(literal), sources, when, question_counter, notes
                )
            )
        sessions.append(SessionDecl(number, tuple(qids), "all"))
    domain = Domain(
        sessions=tuple(sessions),
        statements=tuple(statements),
        questions=tuple(questions),
    )
    return domain, trace
