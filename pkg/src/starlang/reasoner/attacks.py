"""The attack relation between arguments.

An argument attacks another when its conclusion is the complement of a
conclusion drawn anywhere inside the other's proof tree, provided the
attacker's final rule is not less preferred than the rule applied at the
conflicting node. Premise arguments attack contrary conclusions outright
and can never be attacked themselves.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from ..core import Priority, RuleLabel
from .arguments import Argument
from .instances import TimedLiteral, TimedRuleInstance


@dataclass(frozen=True)
class AttackEdge:
    attacker: int
    target: int
    attacking: TimedRuleInstance
    attacked: TimedRuleInstance


def less_preferred(
    attacking: TimedRuleInstance,
    attacked: TimedRuleInstance,
    priority_pairs: frozenset[tuple[RuleLabel, RuleLabel]],
) -> bool:
    """Priority check used to suppress attacks.

    Declared ``>>`` pairs order rule labels; persistence is implicitly
    weaker than any causal instance it conflicts with. Contraposed
    applications keep their instance's label and kind.
    """
    if isinstance(attacking.origin, RuleLabel) and isinstance(attacked.origin, RuleLabel):
        if (attacked.origin, attacking.origin) in priority_pairs:
            return True
    if attacking.kind == "persistence" and attacked.kind == "causal":
        return True
    return False


def compute_attacks(
    args: Iterable[Argument],
    priorities: Iterable[Priority] = (),
) -> list[AttackEdge]:
    args = list(args)
    priority_pairs = frozenset((p.stronger, p.weaker) for p in priorities)
    node_index: dict[TimedLiteral, list[tuple[Argument, TimedRuleInstance]]] = {}
    for arg in args:
        for conclusion, inst in arg.node_pairs:
            node_index.setdefault(conclusion, []).append((arg, inst))

    edges: list[AttackEdge] = []
    seen: set[tuple[int, int, TimedRuleInstance]] = set()
    for attacker in args:
        contrary = attacker.conclusion.negated()
        for target, node_inst in node_index.get(contrary, ()):
            if node_inst.kind == "premise":
                continue  # premises are indefeasible
            if not attacker.is_premise and less_preferred(
                attacker.instance, node_inst, priority_pairs
            ):
                continue
            key = (attacker.id, target.id, node_inst)
            if key in seen:
                continue
            seen.add(key)
            edges.append(AttackEdge(attacker.id, target.id, attacker.instance, node_inst))
    return edges
