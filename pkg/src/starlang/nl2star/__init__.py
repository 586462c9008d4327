"""Natural-language annotations to STAR story conversion."""

from .client import (
    ANNOTATORS,
    AnnotatorError,
    AnnotatorTimeout,
    AnnotatorUnreachable,
    MalformedAnnotation,
    fetch_annotations,
    map_response,
)
from .convert import (
    ARGUMENT_RELS,
    ConversionError,
    EntityTable,
    SessionPlan,
    assign_timepoints,
    build_predicate,
    convert,
    extract_entities,
    is_past_perfect,
    segment_sessions,
)
from .model import (
    QUESTION,
    STATEMENT,
    AnnotatedStory,
    Block,
    ConversionEntry,
    ConversionTrace,
    CorefMention,
    DepEdge,
    Sentence,
    StoryFormatError,
    Token,
    dump_story,
    load_story,
    story_from_json,
    story_to_json,
)

__all__ = [
    "ANNOTATORS",
    "ARGUMENT_RELS",
    "AnnotatedStory",
    "AnnotatorError",
    "AnnotatorTimeout",
    "AnnotatorUnreachable",
    "Block",
    "ConversionEntry",
    "ConversionError",
    "ConversionTrace",
    "CorefMention",
    "DepEdge",
    "EntityTable",
    "MalformedAnnotation",
    "QUESTION",
    "STATEMENT",
    "Sentence",
    "SessionPlan",
    "StoryFormatError",
    "Token",
    "assign_timepoints",
    "build_predicate",
    "convert",
    "dump_story",
    "extract_entities",
    "fetch_annotations",
    "is_past_perfect",
    "load_story",
    "map_response",
    "segment_sessions",
    "story_from_json",
    "story_to_json",
]
