"""Grounding: rule schemata to timed rule instances over the story's terms.

Instances are produced for every time step inside the reading horizon:
causal instances step from t to t+1, property instances stay at t, and
each declared fluent gets persistence instances for both truth values.
Story statements become premise instances so proof trees have uniform
nodes.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Optional, Union

from ..core import (
    Always,
    At,
    Compound,
    Constant,
    Domain,
    Literal,
    Rule,
    RuleLabel,
    Term,
    Variable,
    canonical_text,
    predicate_signature,
)

DEFAULT_GROUNDING_CAP = 1_000_000


class GroundingError(Exception):
    """Raised when grounding a rule would exceed the instance cap."""

    def __init__(self, message: str, rule: Optional[RuleLabel] = None):
        super().__init__(message)
        self.rule = rule


@dataclass(frozen=True)
class TimedLiteral:
    literal: Literal
    time: int

    def negated(self) -> "TimedLiteral":
        return TimedLiteral(self.literal.negated(), self.time)

    def sort_key(self):
        return (self.time, canonical_text(self.literal))


@dataclass(frozen=True)
class PersistenceOrigin:
    signature: str


@dataclass(frozen=True)
class PremiseOrigin:
    session: int
    index: int


Origin = Union[RuleLabel, PersistenceOrigin, PremiseOrigin]


@dataclass(frozen=True)
class TimedRuleInstance:
    origin: Origin
    body: tuple[TimedLiteral, ...]
    head: TimedLiteral
    kind: str  # "causal" | "property" | "persistence" | "premise"

    def __post_init__(self):
        if self.kind == "property" and any(b.time != self.head.time for b in self.body):
            raise ValueError("property instances keep body and head at one time-point")
        if self.kind == "causal" and any(b.time + 1 != self.head.time for b in self.body):
            raise ValueError("causal instances advance time by exactly one")
        if self.kind == "persistence":
            if len(self.body) != 1 or self.body[0].literal != self.head.literal:
                raise ValueError("persistence carries a single literal forward")
            if self.body[0].time + 1 != self.head.time:
                raise ValueError("persistence advances time by exactly one")
        if self.kind == "premise" and self.body:
            raise ValueError("premise instances have no body")

    def label_text(self) -> str:
        if isinstance(self.origin, RuleLabel):
            return canonical_text(self.origin)
        if isinstance(self.origin, PersistenceOrigin):
            return f"persistence({self.origin.signature})"
        return f"premise(s({self.origin.session}))"

    def render(self) -> str:
        body = ",".join(f"{canonical_text(b.literal)}@{b.time}" for b in self.body)
        head = f"{canonical_text(self.head.literal)}@{self.head.time}"
        if not body:
            return f"{self.label_text()} [{head}]"
        return f"{self.label_text()} [{body} => {head}]"

    def sort_key(self):
        return (self.head.time, self.render())


def _collect_terms(term: Term, into: set[Term]) -> None:
    if isinstance(term, Variable):
        return
    into.add(term)
    if isinstance(term, Compound):
        for arg in term.args:
            _collect_terms(arg, into)


def herbrand_universe(domain: Domain, up_to: int) -> tuple[Term, ...]:
    """Ground terms (including subterms) of statements in sessions <= up_to."""
    terms: set[Term] = set()
    for stmt in domain.statements:
        if stmt.session > up_to:
            continue
        for arg in stmt.literal.args:
            _collect_terms(arg, terms)
    return tuple(sorted(terms, key=canonical_text))


def typing_facts(domain: Domain) -> frozenset[Literal]:
    return frozenset(
        stmt.literal
        for stmt in domain.statements
        if stmt.session == 0 and stmt.literal.positive
    )


def typing_signatures(domain: Domain) -> frozenset[str]:
    return frozenset(predicate_signature(lit) for lit in typing_facts(domain))


def default_horizon(domain: Domain, up_to: int) -> int:
    """Largest time-point mentioned by the sessions read so far."""
    horizon = 0
    for stmt in domain.statements:
        if stmt.session <= up_to and isinstance(stmt.when, At):
            horizon = max(horizon, stmt.when.t)
    asked = {
        qid
        for sess in domain.sessions
        if sess.id <= up_to
        for qid in sess.questions
    }
    for question in domain.questions:
        if question.id in asked:
            for _, when in question.choices:
                horizon = max(horizon, when.t)
    return horizon


def max_mentioned_time(domain: Domain) -> int:
    if not domain.sessions:
        return 0
    return default_horizon(domain, max(s.id for s in domain.sessions))


def _rule_variables(rule: Rule) -> list[str]:
    ordered: list[str] = []

    def visit(term: Term) -> None:
        if isinstance(term, Variable):
            if not term.is_anonymous and term.name not in ordered:
                ordered.append(term.name)
        elif isinstance(term, Compound):
            for arg in term.args:
                visit(arg)

    for lit in (*rule.body, rule.head):
        for arg in lit.args:
            visit(arg)
    return ordered


def _substitute_term(term: Term, env: dict[str, Term]) -> Term:
    if isinstance(term, Variable):
        if term.is_anonymous:
            raise GroundingError("anonymous variables are arity markers and cannot appear in rules")
        return env[term.name]
    if isinstance(term, Compound):
        return Compound(term.functor, tuple(_substitute_term(a, env) for a in term.args))
    return term


def _substitute(lit: Literal, env: dict[str, Term]) -> Literal:
    return Literal(lit.positive, lit.name, tuple(_substitute_term(a, env) for a in lit.args))


def _candidate_values(
    rule: Rule,
    variables: list[str],
    universe: tuple[Term, ...],
    facts: frozenset[Literal],
    typed_sigs: frozenset[str],
) -> list[tuple[Term, ...]]:
    """Per-variable candidates, narrowed by single-variable typing literals."""
    allowed: dict[str, set[Term]] = {}
    for lit in rule.body:
        if not lit.positive or predicate_signature(lit) not in typed_sigs:
            continue
        if len(lit.args) == 1 and isinstance(lit.args[0], Variable) and not lit.args[0].is_anonymous:
            var = lit.args[0].name
            values = {fact.args[0] for fact in facts if fact.name == lit.name and len(fact.args) == 1}
            allowed[var] = allowed.get(var, set(universe)) & values
    return [
        tuple(sorted(allowed.get(var, set(universe)), key=canonical_text))
        for var in variables
    ]


def ground(
    domain: Domain,
    up_to: int,
    horizon: Optional[int] = None,
    cap: int = DEFAULT_GROUNDING_CAP,
) -> tuple[TimedRuleInstance, ...]:
    """All rule and persistence instances for the sessions read so far.

    Substitutions that falsify a typing literal of the base session are
    pruned. Raises :class:`GroundingError` when a rule's instance count
    would exceed ``cap``, naming the rule.
    """
    if horizon is None:
        horizon = default_horizon(domain, up_to)
    universe = herbrand_universe(domain, up_to)
    facts = typing_facts(domain)
    typed_sigs = typing_signatures(domain)
    instances: list[TimedRuleInstance] = []

    for rule in domain.rules:
        variables = _rule_variables(rule)
        candidates = _candidate_values(rule, variables, universe, facts, typed_sigs)
        combo_count = 1
        for values in candidates:
            combo_count *= len(values)
        times = horizon if rule.label.kind == "causal" else horizon + 1
        if combo_count * max(times, 1) > cap:
            raise GroundingError(
                f"grounding {canonical_text(rule.label)} needs "
                f"{combo_count * max(times, 1)} instances (cap {cap})",
                rule=rule.label,
            )
        for combo in itertools.product(*candidates) if variables else [()]:
            env = dict(zip(variables, combo))
            try:
                body = tuple(_substitute(lit, env) for lit in rule.body)
                head = _substitute(rule.head, env)
            except GroundingError:
                raise
            if any(
                lit.positive
                and predicate_signature(lit) in typed_sigs
                and lit not in facts
                for lit in body
            ):
                continue
            if rule.label.kind == "causal":
                for t in range(horizon):
                    instances.append(
                        TimedRuleInstance(
                            rule.label,
                            tuple(TimedLiteral(b, t) for b in body),
                            TimedLiteral(head, t + 1),
                            "causal",
                        )
                    )
            else:
                for t in range(horizon + 1):
                    instances.append(
                        TimedRuleInstance(
                            rule.label,
                            tuple(TimedLiteral(b, t) for b in body),
                            TimedLiteral(head, t),
                            "property",
                        )
                    )
        if len(instances) > cap:
            raise GroundingError(
                f"grounding exceeded the {cap}-instance cap at rule {canonical_text(rule.label)}",
                rule=rule.label,
            )

    for decl in domain.fluents:
        atoms: list[Literal]
        if decl.arity == 0:
            atoms = [Literal(True, decl.name)]
        else:
            atoms = [
                Literal(True, decl.name, combo)
                for combo in itertools.product(universe, repeat=decl.arity)
            ]
        for atom in atoms:
            for lit in (atom, atom.negated()):
                for t in range(horizon):
                    instances.append(
                        TimedRuleInstance(
                            PersistenceOrigin(f"{decl.name}/{decl.arity}"),
                            (TimedLiteral(lit, t),),
                            TimedLiteral(lit, t + 1),
                            "persistence",
                        )
                    )
        if len(instances) > cap:
            raise GroundingError(
                f"persistence grounding for {decl.signature} exceeded the {cap}-instance cap"
            )
    return tuple(instances)


def premises(domain: Domain, up_to: int, horizon: int) -> tuple[TimedRuleInstance, ...]:
    """Story statements of the read sessions as indefeasible premise instances."""
    result: list[TimedRuleInstance] = []
    for index, stmt in enumerate(domain.statements):
        if stmt.session > up_to:
            continue
        origin = PremiseOrigin(stmt.session, index)
        if isinstance(stmt.when, Always):
            for t in range(horizon + 1):
                result.append(
                    TimedRuleInstance(origin, (), TimedLiteral(stmt.literal, t), "premise")
                )
        elif stmt.when.t <= horizon:
            result.append(
                TimedRuleInstance(origin, (), TimedLiteral(stmt.literal, stmt.when.t), "premise")
            )
    return tuple(result)


def causally_controlled_atoms(instances: tuple[TimedRuleInstance, ...]) -> frozenset[Literal]:
    """Atoms some causal instance can conclude (in either polarity).

    Fluent instances outside this set admit backward persistence: their
    value can only have entered the story by holding all along, so a later
    value regresses to earlier time-points.
    """
    return frozenset(
        inst.head.literal.atom for inst in instances if inst.kind == "causal"
    )
