"""Comprehension-model filters for the timeline views."""

from __future__ import annotations

from dataclasses import replace
from typing import Iterable, Optional

from ..core import Domain, Literal, predicate_signature
from .reader import ComprehensionModel

FILTER_NAMES = (
    "changing-only",
    "no-fluents",
    "no-actions",
    "no-constants",
    "causal-participants-only",
    "min-frequency",
)


def _rule_signature_counts(domain: Domain) -> dict[str, int]:
    counts: dict[str, int] = {}
    for rule in domain.rules:
        for lit in (*rule.body, rule.head):
            sig = predicate_signature(lit)
            counts[sig] = counts.get(sig, 0) + 1
    return counts


def _changes(model: ComprehensionModel, atom: Literal) -> bool:
    seen: set[bool] = set()
    for t in range(model.horizon + 1):
        value = model.truth(atom, t)
        if value is not None:
            seen.add(value)
    return len(seen) > 1


def filter_model(
    model: ComprehensionModel,
    selections: Iterable[str],
    domain: Optional[Domain] = None,
) -> ComprehensionModel:
    """Restrict the assignment to concept instances passing every filter.

    ``selections`` holds filter names; ``min-frequency=K`` carries its
    threshold inline. The horizon is left unchanged and an empty selection
    returns the model as-is.
    """
    selections = list(selections)
    if not selections:
        return model

    keep_kind_out: set[str] = set()
    changing_only = False
    causal_only = False
    min_frequency: Optional[int] = None
    for raw in selections:
        name, _, param = raw.partition("=")
        if name == "changing-only":
            changing_only = True
        elif name == "no-fluents":
            keep_kind_out.add("fluent")
        elif name == "no-actions":
            keep_kind_out.add("action")
        elif name == "no-constants":
            keep_kind_out.add("constant")
        elif name == "causal-participants-only":
            causal_only = True
        elif name == "min-frequency":
            if not param.isdigit():
                raise ValueError("min-frequency takes an integer, e.g. min-frequency=2")
            min_frequency = int(param)
        else:
            raise ValueError(f"unknown filter {raw!r}; choose from {', '.join(FILTER_NAMES)}")
    if (causal_only or min_frequency is not None) and domain is None:
        raise ValueError("rule-based filters need the domain's background knowledge")

    causal_sigs: set[str] = set()
    if causal_only:
        for rule in domain.rules:
            if rule.label.kind == "causal":
                for lit in (*rule.body, rule.head):
                    causal_sigs.add(predicate_signature(lit))
    counts = _rule_signature_counts(domain) if min_frequency is not None else {}

    def keep(atom: Literal) -> bool:
        if model.kind_of(atom) in keep_kind_out:
            return False
        if changing_only and not _changes(model, atom):
            return False
        sig = predicate_signature(atom)
        if causal_only and sig not in causal_sigs:
            return False
        if min_frequency is not None and counts.get(sig, 0) < min_frequency:
            return False
        return True

    kept_atoms = {atom for atom in model.atoms() if keep(atom)}
    assignment = tuple(
        (atom, t, value) for atom, t, value in model.assignment if atom in kept_atoms
    )
    observed = frozenset(
        tl for tl in model.observed if tl.literal.atom in kept_atoms
    )
    return replace(model, assignment=assignment, observed=observed)
