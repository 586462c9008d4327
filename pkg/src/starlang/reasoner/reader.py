"""Session-by-session story reading.

Each non-zero session is read against the premises of all sessions up to
it: ground the knowledge, build arguments, resolve conflicts through the
grounded extension, assemble the comprehension model and answer the
session's questions. Progress events fire at phase boundaries so callers
can stream status.
"""

from __future__ import annotations

import time as _time
from dataclasses import dataclass, field, replace
from typing import Callable, Optional

from ..core import (
    Domain,
    Literal,
    Question,
    StoryStatement,
    canonical_text,
    predicate_signature,
)
from .arguments import Argument, build_arguments
from .attacks import AttackEdge, compute_attacks
from .extension import grounded_extension, verify_grounded
from .instances import (
    TimedLiteral,
    TimedRuleInstance,
    default_horizon,
    ground,
    max_mentioned_time,
    premises,
)


class ReasonerError(Exception):
    """Raised when a comprehension run cannot produce a consistent model."""


@dataclass(frozen=True)
class ReaderOptions:
    show_universal: bool = False
    show_acceptable: bool = False
    show_retracted: bool = False
    show_elaborated: bool = False
    show_qualified: bool = False
    show_timings: bool = False
    show_story: bool = False
    horizon: Optional[int] = None
    proof_depth: Optional[int] = None


@dataclass(frozen=True)
class ProgressEvent:
    phase: str
    session: int
    detail: dict = field(default_factory=dict)


ProgressSink = Callable[[ProgressEvent], None]

ACCEPTED = "accepted"
REJECTED = "rejected"
POSSIBLE = "possible"


@dataclass(frozen=True)
class ComprehensionModel:
    """Truth assignment over ground concept instances and time-points."""

    horizon: int
    assignment: tuple[tuple[Literal, int, bool], ...]  # (atom, time, value)
    observed: frozenset[TimedLiteral]
    classification: dict[str, str]  # signature -> action | fluent | constant

    def __post_init__(self):
        object.__setattr__(
            self, "_truth", {(atom, t): value for atom, t, value in self.assignment}
        )

    def truth(self, atom: Literal, t: int) -> Optional[bool]:
        return self._truth.get((atom.atom, t))

    def holds(self, literal: Literal, t: int) -> Optional[bool]:
        value = self.truth(literal.atom, t)
        if value is None:
            return None
        return value if literal.positive else not value

    def atoms(self) -> list[Literal]:
        seen: dict[Literal, None] = {}
        for atom, _, _ in self.assignment:
            seen.setdefault(atom)
        return sorted(seen, key=canonical_text)

    def entries_at(self, t: int) -> list[tuple[Literal, bool]]:
        """Signed literals true at t, each flagged observed-or-inferred."""
        entries = []
        for atom, at_t, value in self.assignment:
            if at_t != t:
                continue
            lit = atom if value else atom.negated()
            entries.append((lit, TimedLiteral(lit, t) in self.observed))
        entries.sort(key=lambda pair: canonical_text(pair[0].atom))
        return entries

    def kind_of(self, atom: Literal) -> str:
        return self.classification.get(predicate_signature(atom), "action")


@dataclass(frozen=True)
class QuestionAnswers:
    question: Question
    verdicts: tuple[str, ...]


@dataclass(frozen=True)
class SessionReport:
    session: int
    story_statements: tuple[StoryStatement, ...]
    model: ComprehensionModel
    answers: tuple[QuestionAnswers, ...]
    universal: frozenset[TimedRuleInstance]
    acceptable: frozenset[TimedRuleInstance]
    retracted: frozenset[TimedRuleInstance]
    elaborated: frozenset[TimedRuleInstance]
    qualified: tuple[tuple[TimedRuleInstance, TimedRuleInstance], ...]
    timings: dict[str, float]
    warnings: tuple[str, ...] = ()


def _classify(domain: Domain, atoms: list[Literal]) -> dict[str, str]:
    fluent_sigs = {f.signature for f in domain.fluents}
    constant_sigs = {
        predicate_signature(stmt.literal)
        for stmt in domain.statements
        if stmt.session == 0
    }
    classification: dict[str, str] = {}
    for atom in atoms:
        sig = predicate_signature(atom)
        if sig in fluent_sigs:
            classification[sig] = "fluent"
        elif sig in constant_sigs:
            classification[sig] = "constant"
        else:
            classification[sig] = "action"
    return classification


def _build_model(
    domain: Domain,
    horizon: int,
    extension: list[Argument],
    premise_instances: tuple[TimedRuleInstance, ...],
) -> ComprehensionModel:
    values: dict[tuple[Literal, int], bool] = {}
    for arg in extension:
        lit, t = arg.conclusion.literal, arg.conclusion.time
        key = (lit.atom, t)
        value = lit.positive
        if values.get(key, value) != value:
            raise ReasonerError(
                f"contradictory conclusions accepted for "
                f"{canonical_text(lit.atom)} at {t}; "
                "check the story for conflicting observations or circular priorities"
            )
        values[key] = value
    observed = frozenset(inst.head for inst in premise_instances)
    assignment = tuple(
        (atom, t, value)
        for (atom, t), value in sorted(
            values.items(), key=lambda kv: (kv[0][1], canonical_text(kv[0][0]))
        )
    )
    atoms = sorted({atom for atom, _, _ in assignment}, key=canonical_text)
    return ComprehensionModel(
        horizon=horizon,
        assignment=assignment,
        observed=observed,
        classification=_classify(domain, atoms),
    )


def _answer(model: ComprehensionModel, question: Question) -> QuestionAnswers:
    verdicts = []
    for literal, when in question.choices:
        held = model.holds(literal, when.t)
        if held is True:
            verdicts.append(ACCEPTED)
        elif held is False:
            verdicts.append(REJECTED)
        else:
            verdicts.append(POSSIBLE)
    return QuestionAnswers(question, tuple(verdicts))


def read_story(
    domain: Domain,
    options: Optional[ReaderOptions] = None,
    progress: Optional[ProgressSink] = None,
) -> list[SessionReport]:
    """One report per non-zero session, cumulative over story premises."""
    options = options or ReaderOptions()
    if options.horizon is not None and options.horizon < max_mentioned_time(domain):
        raise ValueError(
            f"horizon override {options.horizon} is below the largest "
            f"mentioned time-point {max_mentioned_time(domain)}"
        )

    def emit(phase: str, session: int, **detail) -> None:
        if progress is not None:
            progress(ProgressEvent(phase, session, dict(detail)))

    reports: list[SessionReport] = []
    prev_acceptable: frozenset[TimedRuleInstance] = frozenset()
    session_ids = sorted(s.id for s in domain.sessions if s.id > 0)
    for sid in session_ids:
        timings: dict[str, float] = {}
        emit("session_started", sid)
        horizon = options.horizon if options.horizon is not None else default_horizon(domain, sid)

        started = _time.perf_counter()
        instances = ground(domain, sid, horizon=horizon)
        premise_instances = premises(domain, sid, horizon)
        timings["grounding"] = (_time.perf_counter() - started) * 1000.0
        emit("grounding_done", sid, instances=len(instances))

        started = _time.perf_counter()
        args, warnings = build_arguments(
            instances, premise_instances, depth_cap=options.proof_depth
        )
        timings["arguments"] = (_time.perf_counter() - started) * 1000.0
        emit("arguments_done", sid, arguments=len(args))

        started = _time.perf_counter()
        edges = compute_attacks(args, domain.priorities)
        extension = grounded_extension(args, edges)
        verify_grounded(extension, edges)
        timings["extension"] = (_time.perf_counter() - started) * 1000.0
        emit("extension_done", sid, accepted=len(extension))

        started = _time.perf_counter()
        model = _build_model(domain, horizon, extension, premise_instances)
        session_decl = next(s for s in domain.sessions if s.id == sid)
        answers = tuple(
            _answer(model, domain.question_by_id(qid)) for qid in session_decl.questions
        )
        timings["answering"] = (_time.perf_counter() - started) * 1000.0
        emit("answers_ready", sid, questions=len(answers))

        universal = frozenset(
            arg.instance for arg in args if arg.instance.kind != "premise"
        )
        in_extension = {arg.id for arg in extension}
        acceptable = frozenset(
            arg.instance for arg in extension if arg.instance.kind != "premise"
        )
        qualified_pairs: dict[tuple[TimedRuleInstance, TimedRuleInstance], None] = {}
        for edge in edges:
            if edge.attacker in in_extension and edge.target not in in_extension:
                if edge.attacked.kind != "premise":
                    qualified_pairs.setdefault((edge.attacked, edge.attacking))
        qualified = tuple(
            sorted(
                qualified_pairs,
                key=lambda pair: (pair[0].sort_key(), pair[1].sort_key()),
            )
        )
        reports.append(
            SessionReport(
                session=sid,
                story_statements=tuple(
                    s for s in domain.statements if s.session == sid
                ),
                model=model,
                answers=answers,
                universal=universal,
                acceptable=acceptable,
                retracted=prev_acceptable - acceptable,
                elaborated=acceptable - prev_acceptable,
                qualified=qualified,
                timings=timings,
                warnings=tuple(warnings),
            )
        )
        prev_acceptable = acceptable
    return reports
