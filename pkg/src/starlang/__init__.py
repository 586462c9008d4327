"""STAR story-comprehension stack.

Subpackages: :mod:`starlang.core` (abstract syntax), :mod:`starlang.parser`
(domain files), :mod:`starlang.reasoner` (argumentation-based reading),
:mod:`starlang.nl2star` (annotated text conversion), :mod:`starlang.kbgraph`
(visual-editor graphs), :mod:`starlang.service` (HTTP platform) and
:mod:`starlang.cli`.
"""

from .core import (
    ALWAYS,
    Always,
    At,
    Compound,
    Constant,
    Domain,
    FluentDecl,
    Literal,
    Priority,
    Question,
    Rule,
    RuleLabel,
    SessionDecl,
    StoryStatement,
    Term,
    TimePoint,
    Variable,
    canonical_text,
    predicate_signature,
)
from .parser import (
    Diagnostic,
    ParseResult,
    format_domain,
    parse_domain,
    parse_literal,
    parse_story_only,
    parse_term,
)
from .pipeline import comprehend

__version__ = "0.1.0"

__all__ = [
    "ALWAYS",
    "Always",
    "At",
    "Compound",
    "Constant",
    "Diagnostic",
    "Domain",
    "FluentDecl",
    "Literal",
    "ParseResult",
    "Priority",
    "Question",
    "Rule",
    "RuleLabel",
    "SessionDecl",
    "StoryStatement",
    "Term",
    "TimePoint",
    "Variable",
    "__version__",
    "canonical_text",
    "comprehend",
    "format_domain",
    "parse_domain",
    "parse_literal",
    "parse_story_only",
    "parse_term",
    "predicate_signature",
]
