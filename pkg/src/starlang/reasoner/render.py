"""Raw text output of a reading run.

The layout mirrors the reasoner's native report: ``===`` scene separators,
``>>>`` phase headers, one ``t:`` line per time-point with observed
literals wrapped in ``< >``, and one verdict line per question choice.
"""

from __future__ import annotations

from typing import Iterable, Optional, Sequence

from ..core import canonical_text
from .instances import TimedRuleInstance
from .reader import (
    ACCEPTED,
    POSSIBLE,
    REJECTED,
    ComprehensionModel,
    ReaderOptions,
    SessionReport,
)

SEPARATOR = "=" * 35

_VERDICT_MARK = {ACCEPTED: "+", REJECTED: "-", POSSIBLE: "?"}


def _model_line(model: ComprehensionModel, t: int) -> str:
    parts = []
    for literal, observed in model.entries_at(t):
        text = canonical_text(literal)
        parts.append(f"< {text}>" if observed else text)
    if not parts:
        return f"{t}:"
    return f"{t}: " + " ".join(parts)


def _instance_lines(title: str, instances: Iterable[TimedRuleInstance]) -> list[str]:
    lines = [title]
    for inst in sorted(instances, key=TimedRuleInstance.sort_key):
        lines.append(f"  {inst.render()}")
    return lines


def render_report(
    report: SessionReport,
    options: Optional[ReaderOptions] = None,
    model: Optional[ComprehensionModel] = None,
) -> str:
    """Text for one session; pass ``model`` to render a filtered view."""
    options = options or ReaderOptions()
    model = model if model is not None else report.model
    lines: list[str] = [
        SEPARATOR,
        f">>> Reading story up to scene s({report.session})",
        SEPARATOR,
    ]
    if options.show_story:
        lines.append(">>> Story:")
        lines.extend(f"  {canonical_text(stmt)}" for stmt in report.story_statements)
        lines.append("")
    for warning in report.warnings:
        lines.append(f">>> Warning: {warning}")
    if options.show_universal:
        lines.extend(_instance_lines(">>> Universal argument...", report.universal))
    else:
        lines.append(">>> Universal argument...")
    if options.show_acceptable:
        lines.extend(_instance_lines(">>> Acceptable argument...", report.acceptable))
    else:
        lines.append(">>> Acceptable argument...")
    if options.show_retracted:
        lines.extend(_instance_lines(">>> Retracted rule instances:", report.retracted))
    if options.show_elaborated:
        lines.extend(_instance_lines(">>> Elaborated rule instances:", report.elaborated))
    if options.show_qualified:
        lines.append(">>> Qualified rule instances:")
        for attacked, attacker in report.qualified:
            lines.append(f"  {attacked.render()} qualified by {attacker.render()}")
    if options.show_timings:
        lines.append(">>> Timings:")
        for phase, elapsed in report.timings.items():
            lines.append(f"  {phase}: {elapsed:.1f} ms")
    lines.append("")
    lines.append(">>> Comprehension model:")
    lines.append("")
    for t in range(model.horizon + 1):
        lines.append(_model_line(model, t))
    for block in report.answers:
        lines.append("")
        lines.append(f">>> Answering question q({block.question.id}):")
        for (literal, when), verdict in zip(block.question.choices, block.verdicts):
            mark = _VERDICT_MARK[verdict]
            lines.append(
                f"{mark} {verdict} choice: ,[{canonical_text(literal)}at {when.t}]"
            )
    return "\n".join(lines)


def render_session_reports(
    reports: Sequence[SessionReport],
    options: Optional[ReaderOptions] = None,
    models: Optional[Sequence[ComprehensionModel]] = None,
) -> str:
    """Concatenated session texts followed by the closing line."""
    chunks = []
    for i, report in enumerate(reports):
        model = models[i] if models is not None else None
        chunks.append(render_report(report, options, model=model))
    body = "\n\n".join(chunks)
    closing = ">>> Finished reading the story!"
    return f"{body}\n\n{closing}" if body else closing
