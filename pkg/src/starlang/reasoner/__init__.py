"""Argumentation-based comprehension of STAR domains."""

from .arguments import Argument, build_arguments
from .attacks import AttackEdge, compute_attacks, less_preferred
from .extension import ExtensionError, grounded_extension, verify_grounded
from .filters import FILTER_NAMES, filter_model
from .instances import (
    DEFAULT_GROUNDING_CAP,
    GroundingError,
    PersistenceOrigin,
    PremiseOrigin,
    TimedLiteral,
    TimedRuleInstance,
    causally_controlled_atoms,
    default_horizon,
    ground,
    herbrand_universe,
    max_mentioned_time,
    premises,
)
from .reader import (
    ACCEPTED,
    ProgressSink,
    POSSIBLE,
    REJECTED,
    ComprehensionModel,
    ProgressEvent,
    QuestionAnswers,
    ReaderOptions,
    ReasonerError,
    SessionReport,
    read_story,
)
from .render import SEPARATOR, render_report, render_session_reports
from .structured import model_payload, report_payload, story_payload

__all__ = [
    "ACCEPTED",
    "AttackEdge",
    "Argument",
    "ComprehensionModel",
    "DEFAULT_GROUNDING_CAP",
    "ExtensionError",
    "FILTER_NAMES",
    "GroundingError",
    "PersistenceOrigin",
    "POSSIBLE",
    "PremiseOrigin",
    "ProgressEvent",
    "ProgressSink",
    "QuestionAnswers",
    "REJECTED",
    "ReaderOptions",
    "ReasonerError",
    "SEPARATOR",
    "SessionReport",
    "TimedLiteral",
    "TimedRuleInstance",
    "build_arguments",
    "causally_controlled_atoms",
    "compute_attacks",
    "default_horizon",
    "filter_model",
    "ground",
    "grounded_extension",
    "herbrand_universe",
    "less_preferred",
    "max_mentioned_time",
    "model_payload",
    "premises",
    "read_story",
    "render_report",
    "render_session_reports",
    "report_payload",
    "story_payload",
    "verify_grounded",
]
