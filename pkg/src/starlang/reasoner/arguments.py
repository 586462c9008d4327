"""Proof-tree construction over timed rule instances.

Arguments are built bottom-up from story premises, closing the set under
forward (modus ponens) and backward (modus tollens) rule application.
One argument is materialized per (conclusion, final instance, direction);
sub-proofs reuse the first argument found for each conclusion, which a
breadth-first schedule keeps minimal.

Backward steps through persistence are restricted to fluent instances no
causal rule can conclude: for those the frame assumption regresses cleanly,
while a causally controlled fluent may owe its value to the causal onset
and carries no information about earlier time-points.
"""

from __future__ import annotations

from typing import Iterable, Optional

from ..core import canonical_text
from .instances import TimedLiteral, TimedRuleInstance, causally_controlled_atoms


class Argument:
    """A proof tree rooted in premises; nodes are rule-instance applications."""

    __slots__ = (
        "id",
        "conclusion",
        "instance",
        "direction",
        "children",
        "instances",
        "node_pairs",
        "size",
    )

    def __init__(
        self,
        arg_id: int,
        conclusion: TimedLiteral,
        instance: TimedRuleInstance,
        direction: str,
        children: tuple["Argument", ...],
    ):
        self.id = arg_id
        self.conclusion = conclusion
        self.instance = instance
        self.direction = direction
        self.children = children
        insts = {instance}
        pairs = {(conclusion, instance)}
        for child in children:
            insts.update(child.instances)
            pairs.update(child.node_pairs)
        self.instances = frozenset(insts)
        self.node_pairs = frozenset(pairs)
        self.size = 1 + sum(c.size for c in children)

    @property
    def is_premise(self) -> bool:
        return self.instance.kind == "premise"

    def describe(self) -> str:
        mark = "" if self.direction == "forward" else " (backward)"
        return f"{canonical_text(self.conclusion.literal)}@{self.conclusion.time} via {self.instance.label_text()}{mark}"

    def __repr__(self) -> str:  # pragma: no cover - debugging aid
        return f"Argument({self.id}: {self.describe()})"


def build_arguments(
    instances: Iterable[TimedRuleInstance],
    premises: Iterable[TimedRuleInstance],
    depth_cap: Optional[int] = None,
) -> tuple[list[Argument], list[str]]:
    """Close premises under rule application; returns (arguments, warnings)."""
    instances = tuple(instances)
    premises = tuple(premises)
    if depth_cap is None:
        depth_cap = max(len(instances), 1)
    regressable = _regressable_check(instances)

    args: list[Argument] = []
    canonical: dict[TimedLiteral, Argument] = {}
    seen: set[tuple[TimedLiteral, TimedRuleInstance, str]] = set()

    def add(conclusion: TimedLiteral, inst: TimedRuleInstance, direction: str,
            children: tuple[Argument, ...]) -> Optional[TimedLiteral]:
        key = (conclusion, inst, direction)
        if key in seen:
            return None
        for child in children:
            if inst in child.instances:  # acyclic proofs only
                return None
        seen.add(key)
        arg = Argument(len(args), conclusion, inst, direction, children)
        args.append(arg)
        if conclusion not in canonical:
            canonical[conclusion] = arg
            return conclusion
        return None

    frontier: list[TimedLiteral] = []
    for prem in premises:
        new = add(prem.head, prem, "forward", ())
        if new is not None:
            frontier.append(new)

    # indexes from input literals to the instances that consume them
    by_body: dict[TimedLiteral, list[TimedRuleInstance]] = {}
    by_neg_head: dict[TimedLiteral, list[TimedRuleInstance]] = {}
    empty_body: list[TimedRuleInstance] = []
    for inst in instances:
        if not inst.body:
            empty_body.append(inst)
            continue
        for lit in dict.fromkeys(inst.body):
            by_body.setdefault(lit, []).append(inst)
        if _backward_ok(inst, regressable):
            by_neg_head.setdefault(inst.head.negated(), []).append(inst)

    for inst in empty_body:
        new = add(inst.head, inst, "forward", ())
        if new is not None:
            frontier.append(new)

    warnings: list[str] = []
    rounds = 0
    while frontier:
        rounds += 1
        if rounds > depth_cap:
            warnings.append(
                f"proof construction truncated at depth {depth_cap}; "
                "deeper inferences were not explored"
            )
            break
        frontier.sort(key=TimedLiteral.sort_key)
        triggered: list[TimedRuleInstance] = []
        trigger_seen: set[int] = set()
        for lit in frontier:
            for inst in by_body.get(lit, ()):  # forward candidates
                if id(inst) not in trigger_seen:
                    trigger_seen.add(id(inst))
                    triggered.append(inst)
            for inst in by_neg_head.get(lit, ()):  # backward via fresh negated head
                if id(inst) not in trigger_seen:
                    trigger_seen.add(id(inst))
                    triggered.append(inst)
        frontier = []
        for inst in triggered:
            distinct_body = tuple(dict.fromkeys(inst.body))
            if all(b in canonical for b in distinct_body):
                children = tuple(canonical[b] for b in distinct_body)
                new = add(inst.head, inst, "forward", children)
                if new is not None:
                    frontier.append(new)
            if not _backward_ok(inst, regressable):
                continue
            neg_head = inst.head.negated()
            if neg_head not in canonical:
                continue
            for i, target in enumerate(distinct_body):
                rest = distinct_body[:i] + distinct_body[i + 1 :]
                if all(b in canonical for b in rest):
                    children = (canonical[neg_head],) + tuple(canonical[b] for b in rest)
                    new = add(target.negated(), inst, "backward", children)
                    if new is not None:
                        frontier.append(new)
    return args, warnings


def _regressable_check(instances: tuple[TimedRuleInstance, ...]):
    controlled = causally_controlled_atoms(instances)

    def regressable(inst: TimedRuleInstance) -> bool:
        return inst.head.literal.atom not in controlled

    return regressable


def _backward_ok(inst: TimedRuleInstance, regressable) -> bool:
    if inst.kind == "premise":
        return False
    if inst.kind == "persistence":
        return regressable(inst)
    return True
