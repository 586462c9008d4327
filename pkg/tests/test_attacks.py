from starlang.core import Constant, Literal, Priority, RuleLabel
from starlang.reasoner import (
    PersistenceOrigin,
    PremiseOrigin,
    TimedLiteral,
    TimedRuleInstance,
    build_arguments,
    compute_attacks,
    less_preferred,
)


def lit(name, *args, positive=True):
    return Literal(positive, name, tuple(Constant(a) for a in args))


def premise(literal, t, index):
    return TimedRuleInstance(PremiseOrigin(1, index), (), TimedLiteral(literal, t), "premise")


def _phone_scene():
    """Ringing persists from 16 while an answer at 16 stops it at 17."""
    ringing = lit("is_ringing", "phone1")
    pers = TimedRuleInstance(
        PersistenceOrigin("is_ringing/1"),
        (TimedLiteral(ringing, 16),),
        TimedLiteral(ringing, 17),
        "persistence",
    )
    stop = TimedRuleInstance(
        RuleLabel("causal", 42),
        (TimedLiteral(lit("answer", "mary", "phone1"), 16),),
        TimedLiteral(ringing.negated(), 17),
        "causal",
    )
    rows = (premise(ringing, 16, 0), premise(lit("answer", "mary", "phone1"), 16, 1))
    args, _ = build_arguments((pers, stop), rows)
    by_conclusion = {
        (a.conclusion.literal, a.conclusion.time): a for a in args if not a.is_premise
    }
    return args, by_conclusion[(ringing, 17)], by_conclusion[(ringing.negated(), 17)]


def test_causal_attacks_conflicting_persistence_one_way():
    args, persisted, stopped = _phone_scene()
    edges = compute_attacks(args)
    pairs = {(e.attacker, e.target) for e in edges if not args[e.attacker].is_premise}
    assert (stopped.id, persisted.id) in pairs
    assert (persisted.id, stopped.id) not in pairs


def test_non_conflicting_conclusions_never_attack():
    rows = (premise(lit("a"), 0, 0), premise(lit("b"), 1, 1))
    args, _ = build_arguments((), rows)
    assert compute_attacks(args) == []


def test_equally_preferred_conflicting_rules_attack_each_other():
    up = TimedRuleInstance(
        RuleLabel("property", 1),
        (TimedLiteral(lit("a"), 0),),
        TimedLiteral(lit("p"), 0),
        "property",
    )
    down = TimedRuleInstance(
        RuleLabel("property", 2),
        (TimedLiteral(lit("b"), 0),),
        TimedLiteral(lit("p", positive=False), 0),
        "property",
    )
    rows = (premise(lit("a"), 0, 0), premise(lit("b"), 0, 1))
    args, _ = build_arguments((up, down), rows)
    edges = compute_attacks(args)
    derived = [a.id for a in args if not a.is_premise]
    pairs = {(e.attacker, e.target) for e in edges}
    assert (derived[0], derived[1]) in pairs
    assert (derived[1], derived[0]) in pairs


def test_declared_priority_suppresses_the_weaker_attack():
    up = TimedRuleInstance(
        RuleLabel("property", 1),
        (TimedLiteral(lit("a"), 0),),
        TimedLiteral(lit("p"), 0),
        "property",
    )
    down = TimedRuleInstance(
        RuleLabel("property", 2),
        (TimedLiteral(lit("b"), 0),),
        TimedLiteral(lit("p", positive=False), 0),
        "property",
    )
    rows = (premise(lit("a"), 0, 0), premise(lit("b"), 0, 1))
    args, _ = build_arguments((up, down), rows)
    priority = Priority(RuleLabel("property", 1), RuleLabel("property", 2))
    edges = compute_attacks(args, (priority,))
    by_id = {a.id: a for a in args}
    real = {(e.attacker, e.target) for e in edges if not by_id[e.attacker].is_premise}
    stronger = next(a.id for a in args if a.instance is up)
    weaker = next(a.id for a in args if a.instance is down)
    assert (stronger, weaker) in real
    assert (weaker, stronger) not in real


def test_premises_attack_contrary_conclusions_and_are_never_attacked():
    wrong = TimedRuleInstance(
        RuleLabel("property", 9),
        (TimedLiteral(lit("b"), 0),),
        TimedLiteral(lit("a", positive=False), 0),
        "property",
    )
    rows = (premise(lit("a"), 0, 0), premise(lit("b"), 0, 1))
    args, _ = build_arguments((wrong,), rows)
    edges = compute_attacks(args)
    by_id = {a.id: a for a in args}
    assert all(not by_id[e.target].is_premise for e in edges)
    premise_attacks = [e for e in edges if by_id[e.attacker].is_premise]
    assert premise_attacks, "the observation must strike the contrary derivation"


def test_attack_reaches_internal_nodes():
    first = TimedRuleInstance(
        RuleLabel("property", 1),
        (TimedLiteral(lit("a"), 0),),
        TimedLiteral(lit("mid"), 0),
        "property",
    )
    second = TimedRuleInstance(
        RuleLabel("property", 2),
        (TimedLiteral(lit("mid"), 0),),
        TimedLiteral(lit("top"), 0),
        "property",
    )
    contrary = TimedRuleInstance(
        RuleLabel("property", 3),
        (TimedLiteral(lit("c"), 0),),
        TimedLiteral(lit("mid", positive=False), 0),
        "property",
    )
    rows = (premise(lit("a"), 0, 0), premise(lit("c"), 0, 1))
    args, _ = build_arguments((first, second, contrary), rows)
    edges = compute_attacks(args)
    top_arg = next(a for a in args if a.conclusion.literal == lit("top"))
    attackers_of_top = {e.attacker for e in edges if e.target == top_arg.id}
    contrary_arg = next(a for a in args if a.instance is contrary)
    assert contrary_arg.id in attackers_of_top
    edge = next(e for e in edges if e.target == top_arg.id and e.attacker == contrary_arg.id)
    assert edge.attacked is first  # the conflict sits at the inner node


def test_less_preferred_is_not_transitive_beyond_declared_pairs():
    a, b, c = (RuleLabel("causal", i) for i in (1, 2, 3))
    pairs = frozenset({(a, b), (b, c)})

    def inst(label):
        return TimedRuleInstance(
            label, (TimedLiteral(lit("x"), 0),), TimedLiteral(lit("y"), 1), "causal"
        )

    assert less_preferred(inst(b), inst(a), pairs)
    assert less_preferred(inst(c), inst(b), pairs)
    assert not less_preferred(inst(c), inst(a), pairs)
