"""Abstract syntax for the STAR story language.

Every value here is immutable and validated on construction, so downstream
code (parser, reasoner, converters) can share them freely across threads.
``canonical_text`` serializes any of these values back to the concrete
syntax; the parser guarantees a structural round trip.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Union

_CONSTANT_RE = re.compile(r"[a-z][a-zA-Z0-9_]*\Z")
_VARIABLE_RE = re.compile(r"[A-Z_][a-zA-Z0-9_]*\Z")


@dataclass(frozen=True)
class Constant:
    name: str

    def __post_init__(self):
        if not _CONSTANT_RE.match(self.name):
            raise ValueError(f"invalid constant name: {self.name!r}")


@dataclass(frozen=True)
class Variable:
    name: str

    def __post_init__(self):
        if not _VARIABLE_RE.match(self.name):
            raise ValueError(f"invalid variable name: {self.name!r}")

    @property
    def is_anonymous(self) -> bool:
        return self.name == "_"


@dataclass(frozen=True)
class Compound:
    functor: str
    args: tuple["Term", ...]

    def __post_init__(self):
        if not _CONSTANT_RE.match(self.functor):
            raise ValueError(f"invalid functor name: {self.functor!r}")
        if len(self.args) < 1:
            raise ValueError("compound terms need at least one argument")


Term = Union[Constant, Variable, Compound]


@dataclass(frozen=True)
class Literal:
    """A possibly negated predicate instance.

    Negation is a single boolean flag; a doubly negated literal cannot be
    represented, so negating twice restores the original value.
    """

    positive: bool
    name: str
    args: tuple[Term, ...] = ()

    def __post_init__(self):
        if not _CONSTANT_RE.match(self.name):
            raise ValueError(f"invalid predicate name: {self.name!r}")

    def negated(self) -> "Literal":
        return Literal(not self.positive, self.name, self.args)

    @property
    def atom(self) -> "Literal":
        """The positive form, used as a model key."""
        return self if self.positive else Literal(True, self.name, self.args)


@dataclass(frozen=True)
class At:
    t: int

    def __post_init__(self):
        if self.t < 0:
            raise ValueError("time-points must be non-negative")


@dataclass(frozen=True)
class Always:
    pass


ALWAYS = Always()
TimePoint = Union[At, Always]


@dataclass(frozen=True)
class StoryStatement:
    session: int
    literal: Literal
    when: TimePoint

    def __post_init__(self):
        if self.session < 0:
            raise ValueError("session ids must be non-negative")
        if self.session == 0 and not isinstance(self.when, Always):
            raise ValueError("session 0 statements must use 'always'")
        if self.session > 0 and not isinstance(self.when, At):
            raise ValueError("timed sessions require a numeric time-point")


@dataclass(frozen=True)
class Question:
    id: int
    choices: tuple[tuple[Literal, At], ...]

    def __post_init__(self):
        if self.id < 0:
            raise ValueError("question ids must be non-negative")
        if not self.choices:
            raise ValueError("questions need at least one choice")
        for _, when in self.choices:
            if not isinstance(when, At):
                raise ValueError("question choices require numeric time-points")


@dataclass(frozen=True)
class SessionDecl:
    id: int
    questions: tuple[int, ...] = ()
    visibility: str = "all"

    def __post_init__(self):
        if self.id < 0:
            raise ValueError("session ids must be non-negative")
        if self.visibility != "all":
            raise ValueError("only the 'all' visibility token is supported")


@dataclass(frozen=True)
class RuleLabel:
    kind: str  # "causal" or "property"
    index: int

    def __post_init__(self):
        if self.kind not in ("causal", "property"):
            raise ValueError(f"unknown rule kind: {self.kind!r}")
        if self.index < 0:
            raise ValueError("rule indices must be non-negative")

    @property
    def letter(self) -> str:
        return "c" if self.kind == "causal" else "p"


@dataclass(frozen=True)
class Rule:
    label: RuleLabel
    body: tuple[Literal, ...]  # empty tuple encodes the tautological body
    head: Literal

    @property
    def connective(self) -> str:
        return "causes" if self.label.kind == "causal" else "implies"


@dataclass(frozen=True)
class Priority:
    stronger: RuleLabel
    weaker: RuleLabel

    def __post_init__(self):
        if self.stronger == self.weaker:
            raise ValueError("a rule cannot be declared stronger than itself")


@dataclass(frozen=True)
class FluentDecl:
    name: str
    arity: int

    def __post_init__(self):
        if not _CONSTANT_RE.match(self.name):
            raise ValueError(f"invalid fluent name: {self.name!r}")
        if self.arity < 0:
            raise ValueError("fluent arity must be non-negative")

    @property
    def signature(self) -> str:
        return f"{self.name}/{self.arity}"


@dataclass(frozen=True)
class Domain:
    sessions: tuple[SessionDecl, ...] = ()
    statements: tuple[StoryStatement, ...] = ()
    questions: tuple[Question, ...] = ()
    fluents: tuple[FluentDecl, ...] = ()
    rules: tuple[Rule, ...] = ()
    priorities: tuple[Priority, ...] = ()

    def __post_init__(self):
        session_ids = [s.id for s in self.sessions]
        if sorted(session_ids) != list(range(len(session_ids))):
            raise ValueError("session ids must be consecutive from 0")
        question_ids = {q.id for q in self.questions}
        if len(question_ids) != len(self.questions):
            raise ValueError("duplicate question id")
        for sess in self.sessions:
            for qid in sess.questions:
                if qid not in question_ids:
                    raise ValueError(f"session s({sess.id}) references unknown question q({qid})")
        declared = set(session_ids)
        for stmt in self.statements:
            if stmt.session not in declared:
                raise ValueError(f"statement references undeclared session s({stmt.session})")
        labels = [r.label for r in self.rules]
        if len(set(labels)) != len(labels):
            raise ValueError("duplicate rule label")
        label_set = set(labels)
        for prio in self.priorities:
            if prio.stronger not in label_set or prio.weaker not in label_set:
                raise ValueError("priority references undeclared rule label")
        sigs = [(f.name, f.arity) for f in self.fluents]
        if len(set(sigs)) != len(sigs):
            raise ValueError("duplicate fluent declaration")

    def rule_by_label(self, label: RuleLabel) -> Rule:
        for rule in self.rules:
            if rule.label == label:
                return rule
        raise KeyError(canonical_text(label))

    def question_by_id(self, qid: int) -> Question:
        for q in self.questions:
            if q.id == qid:
                return q
        raise KeyError(f"q({qid})")


def predicate_signature(literal: Literal) -> str:
    """``name/arity`` with only top-level arguments counted."""
    return f"{literal.name}/{len(literal.args)}"


def _term_text(term: Term) -> str:
    if isinstance(term, Compound):
        return f"{term.functor}({','.join(_term_text(a) for a in term.args)})"
    return term.name


def _literal_text(lit: Literal) -> str:
    sign = "" if lit.positive else "-"
    if not lit.args:
        return f"{sign}{lit.name}"
    return f"{sign}{lit.name}({','.join(_term_text(a) for a in lit.args)})"


def _timepoint_text(tp: TimePoint) -> str:
    return "always" if isinstance(tp, Always) else str(tp.t)


def _label_text(label: RuleLabel) -> str:
    return f"{label.letter}({label.index:02d})"


def _fluent_text(decl: FluentDecl) -> str:
    if decl.arity == 0:
        return decl.name
    return f"{decl.name}({','.join('_' * decl.arity)})"


def _domain_text(domain: Domain) -> str:
    groups: list[list[str]] = []
    if domain.sessions:
        groups.append([canonical_text(s) for s in domain.sessions])
    if domain.statements:
        groups.append([canonical_text(s) for s in domain.statements])
    if domain.questions:
        groups.append([canonical_text(q) for q in domain.questions])
    if domain.fluents:
        items = ",".join(_fluent_text(f) for f in domain.fluents)
        groups.append([f"fluents([{items}])."])
    if domain.rules:
        groups.append([canonical_text(r) for r in domain.rules])
    if domain.priorities:
        groups.append([canonical_text(p) for p in domain.priorities])
    if not groups:
        return ""
    return "\n\n".join("\n".join(g) for g in groups) + "\n"


def canonical_text(item) -> str:
    """Deterministic concrete syntax for any core value.

    Parsing the result yields a structurally equal value.
    """
    if isinstance(item, (Constant, Variable, Compound)):
        return _term_text(item)
    if isinstance(item, Literal):
        return _literal_text(item)
    if isinstance(item, (At, Always)):
        return _timepoint_text(item)
    if isinstance(item, StoryStatement):
        return (
            f"s({item.session}) :: {_literal_text(item.literal)}"
            f" at {_timepoint_text(item.when)}."
        )
    if isinstance(item, Question):
        choices = "; ".join(
            f"{_literal_text(lit)} at {when.t}" for lit, when in item.choices
        )
        return f"q({item.id}) ?? {choices}."
    if isinstance(item, SessionDecl):
        qs = ",".join(f"q({q})" for q in item.questions)
        return f"session(s({item.id}),[{qs}],{item.visibility})."
    if isinstance(item, RuleLabel):
        return _label_text(item)
    if isinstance(item, Rule):
        body = ", ".join(_literal_text(b) for b in item.body) if item.body else "true"
        return f"{_label_text(item.label)} :: {body} {item.connective} {_literal_text(item.head)}."
    if isinstance(item, Priority):
        return f"{_label_text(item.stronger)} >> {_label_text(item.weaker)}."
    if isinstance(item, FluentDecl):
        return _fluent_text(item)
    if isinstance(item, Domain):
        return _domain_text(item)
    raise TypeError(f"cannot serialize {type(item).__name__}")
