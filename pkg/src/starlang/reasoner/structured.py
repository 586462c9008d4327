"""JSON-ready view of session reports for the timeline UI and tooling."""

from __future__ import annotations

from typing import Optional, Sequence

from ..core import canonical_text, predicate_signature
from .instances import TimedLiteral
from .reader import ComprehensionModel, SessionReport


def model_payload(model: ComprehensionModel) -> dict:
    concepts = []
    for atom in model.atoms():
        cells = []
        for t in range(model.horizon + 1):
            value = model.truth(atom, t)
            if value is None:
                state, observed = "unknown", False
            else:
                lit = atom if value else atom.negated()
                state = "positive" if value else "negative"
                observed = TimedLiteral(lit, t) in model.observed
            cells.append({"t": t, "value": state, "observed": observed})
        concepts.append(
            {
                "name": canonical_text(atom),
                "signature": predicate_signature(atom),
                "kind": model.kind_of(atom),
                "cells": cells,
            }
        )
    return {"horizon": model.horizon, "concepts": concepts}


def report_payload(
    report: SessionReport, model: Optional[ComprehensionModel] = None
) -> dict:
    answers = []
    for block in report.answers:
        answers.append(
            {
                "question": block.question.id,
                "choices": [
                    {
                        "literal": canonical_text(literal),
                        "time": when.t,
                        "verdict": verdict,
                    }
                    for (literal, when), verdict in zip(
                        block.question.choices, block.verdicts
                    )
                ],
            }
        )
    payload = model_payload(model if model is not None else report.model)
    payload.update(
        {
            "session": report.session,
            "answers": answers,
            "warnings": list(report.warnings),
        }
    )
    return payload


def story_payload(
    reports: Sequence[SessionReport],
    models: Optional[Sequence[ComprehensionModel]] = None,
) -> dict:
    return {
        "sessions": [
            report_payload(report, models[i] if models is not None else None)
            for i, report in enumerate(reports)
        ]
    }
