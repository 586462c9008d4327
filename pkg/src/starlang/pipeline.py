"""One entry point for a full comprehension run.

The CLI and the job-queue service both go through here, so the rendered
text of a run is byte-identical on either path.
"""

from __future__ import annotations

from typing import Optional, Sequence

from .core import Domain
from .reasoner import (
    ComprehensionModel,
    ProgressSink,
    ReaderOptions,
    SessionReport,
    filter_model,
    read_story,
    render_session_reports,
    story_payload,
)


def comprehend(
    domain: Domain,
    options: Optional[ReaderOptions] = None,
    filters: Sequence[str] = (),
    progress: Optional[ProgressSink] = None,
) -> tuple[list[SessionReport], str, dict]:
    """Read the story; returns (reports, rendered text, structured payload)."""
    options = options or ReaderOptions()
    reports = read_story(domain, options, progress)
    models: Optional[list[ComprehensionModel]] = None
    if filters:
        models = [filter_model(report.model, filters, domain) for report in reports]
    text = render_session_reports(reports, options, models)
    payload = story_payload(reports, models)
    return reports, text, payload
