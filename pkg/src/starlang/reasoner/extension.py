"""Grounded extension of an attack graph.

The extension is the least fixpoint of the defense function
``F(S) = {a : every attacker of a is attacked by some member of S}``,
iterated from the empty set. It is unique, conflict-free and admissible.
"""

from __future__ import annotations

from typing import Iterable, Sequence

from .arguments import Argument
from .attacks import AttackEdge


class ExtensionError(Exception):
    """Internal consistency failure of the extension computation."""


def grounded_extension(
    args: Sequence[Argument],
    attacks: Iterable[AttackEdge],
) -> list[Argument]:
    by_id = {arg.id: arg for arg in args}
    attackers: dict[int, set[int]] = {arg.id: set() for arg in args}
    for edge in attacks:
        attackers[edge.target].add(edge.attacker)

    accepted: set[int] = set()
    while True:
        step = {
            aid
            for aid in attackers
            if all(attackers[attacker] & accepted for attacker in attackers[aid])
        }
        if step == accepted:
            break
        accepted = step
    return [by_id[aid] for aid in sorted(accepted)]


def verify_grounded(
    extension: Sequence[Argument],
    attacks: Iterable[AttackEdge],
) -> None:
    """Assert conflict-freeness and self-defense; raises ExtensionError."""
    inside = {arg.id for arg in extension}
    attackers: dict[int, set[int]] = {}
    for edge in attacks:
        attackers.setdefault(edge.target, set()).add(edge.attacker)
        if edge.attacker in inside and edge.target in inside:
            raise ExtensionError(
                f"extension is not conflict-free: {edge.attacker} attacks {edge.target}"
            )
    for arg in extension:
        for attacker in attackers.get(arg.id, ()):
            if not attackers.get(attacker, set()) & inside:
                raise ExtensionError(
                    f"extension member {arg.id} is undefended against {attacker}"
                )
