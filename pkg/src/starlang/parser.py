"""Text layer for STAR domain files.

``parse_domain`` turns source text into a :class:`~starlang.core.Domain`
and reports position-accurate diagnostics with fix hints; ``format_domain``
is the inverse pretty-printer. ``parse_story_only`` restricts the accepted
clauses to the story pane (sessions, statements, questions).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .core import (
    ALWAYS,
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
    Variable,
    canonical_text,
)


@dataclass(frozen=True)
class Diagnostic:
    severity: str  # "error" or "warning"
    line: int
    column: int
    message: str
    hint: Optional[str] = None

    def render(self) -> str:
        text = f"{self.line}:{self.column}: {self.severity}: {self.message}"
        if self.hint:
            text += f" (hint: {self.hint})"
        return text


@dataclass
class ParseResult:
    domain: Optional[Domain]
    diagnostics: list[Diagnostic] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.domain is not None

    def errors(self) -> list[Diagnostic]:
        return [d for d in self.diagnostics if d.severity == "error"]


class _ParseError(Exception):
    def __init__(self, line: int, column: int, message: str, hint: str):
        super().__init__(message)
        self.line = line
        self.column = column
        self.message = message
        self.hint = hint


@dataclass(frozen=True)
class _Token:
    kind: str  # NAME VAR INT PUNCT END EOF
    value: str
    line: int
    column: int


_PUNCT2 = ("::", "??", ">>")
_PUNCT1 = "()[],;-"


def _tokenize(source: str) -> list[_Token]:
    tokens: list[_Token] = []
    line, col = 1, 1
    i, n = 0, len(source)
    while i < n:
        ch = source[i]
        if ch == "\n":
            line += 1
            col = 1
            i += 1
            continue
        if ch in " \t\r":
            i += 1
            col += 1
            continue
        if ch == "%":
            while i < n and source[i] != "\n":
                i += 1
            continue
        start_line, start_col = line, col
        two = source[i : i + 2]
        if two in _PUNCT2:
            tokens.append(_Token("PUNCT", two, start_line, start_col))
            i += 2
            col += 2
            continue
        if ch == ".":
            tokens.append(_Token("END", ".", start_line, start_col))
            i += 1
            col += 1
            continue
        if ch in _PUNCT1:
            tokens.append(_Token("PUNCT", ch, start_line, start_col))
            i += 1
            col += 1
            continue
        if ch.isdigit():
            j = i
            while j < n and source[j].isdigit():
                j += 1
            tokens.append(_Token("INT", source[i:j], start_line, start_col))
            col += j - i
            i = j
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < n and (source[j].isalnum() or source[j] == "_"):
                j += 1
            word = source[i:j]
            kind = "NAME" if ch.islower() else "VAR"
            tokens.append(_Token(kind, word, start_line, start_col))
            col += j - i
            i = j
            continue
        raise _ParseError(
            start_line,
            start_col,
            f"unexpected character {ch!r}",
            "remove the character or check the clause syntax",
        )
    tokens.append(_Token("EOF", "", line, col))
    return tokens


class _Parser:
    def __init__(self, tokens: list[_Token], story_only: bool):
        self.tokens = tokens
        self.pos = 0
        self.story_only = story_only
        self.sessions: list[tuple[SessionDecl, _Token]] = []
        self.statements: list[tuple[StoryStatement, _Token]] = []
        self.questions: list[tuple[Question, _Token]] = []
        self.fluents: list[tuple[FluentDecl, _Token]] = []
        self.rules: list[tuple[Rule, _Token]] = []
        self.priorities: list[tuple[Priority, _Token]] = []

    # -- token helpers -------------------------------------------------

    def peek(self, ahead: int = 0) -> _Token:
        return self.tokens[min(self.pos + ahead, len(self.tokens) - 1)]

    def next(self) -> _Token:
        tok = self.tokens[self.pos]
        if tok.kind != "EOF":
            self.pos += 1
        return tok

    def expect(self, kind: str, value: Optional[str] = None, what: str = "") -> _Token:
        tok = self.next()
        if tok.kind != kind or (value is not None and tok.value != value):
            expected = value if value is not None else what or kind.lower()
            found = tok.value if tok.value else "end of input"
            raise _ParseError(
                tok.line,
                tok.column,
                f"expected {expected!r}, found {found!r}",
                "check the clause against the STAR syntax reference",
            )
        return tok

    def fail(self, tok: _Token, message: str, hint: str):
        raise _ParseError(tok.line, tok.column, message, hint)

    # -- grammar -------------------------------------------------------

    def parse(self) -> None:
        while self.peek().kind != "EOF":
            self.clause()

    def skip_to_clause_end(self) -> None:
        while self.peek().kind not in ("END", "EOF"):
            self.next()
        if self.peek().kind == "END":
            self.next()

    def clause(self) -> None:
        tok = self.peek()
        if tok.kind != "NAME":
            self.fail(
                tok,
                f"a clause cannot start with {tok.value!r}",
                "clauses start with session(...), s(N), q(N), fluents([...]), c(N) or p(N)",
            )
        if tok.value == "session":
            self.session_clause()
        elif tok.value == "s" and self.peek(1).value == "(":
            self.statement_clause()
        elif tok.value == "q" and self.peek(1).value == "(":
            self.question_clause()
        elif tok.value == "fluents":
            self.knowledge_guard(tok, "fluents declaration")
            self.fluents_clause()
        elif tok.value in ("c", "p") and self.peek(1).value == "(":
            self.knowledge_guard(tok, "rule or priority")
            self.rule_or_priority_clause()
        else:
            self.fail(
                tok,
                f"unrecognized clause starting with {tok.value!r}",
                "clauses start with session(...), s(N), q(N), fluents([...]), c(N) or p(N)",
            )

    def knowledge_guard(self, tok: _Token, what: str) -> None:
        if self.story_only:
            self.fail(
                tok,
                f"background-knowledge clause in story pane ({what})",
                "move rules, fluents and priorities to the background-knowledge pane",
            )

    def int_value(self, what: str) -> int:
        tok = self.expect("INT", what=what)
        return int(tok.value)

    def session_ref(self) -> int:
        self.expect("NAME", "s")
        self.expect("PUNCT", "(")
        value = self.int_value("session number")
        self.expect("PUNCT", ")")
        return value

    def question_ref(self) -> int:
        self.expect("NAME", "q")
        self.expect("PUNCT", "(")
        value = self.int_value("question number")
        self.expect("PUNCT", ")")
        return value

    def session_clause(self) -> None:
        start = self.next()  # session
        self.expect("PUNCT", "(")
        sid = self.session_ref()
        self.expect("PUNCT", ",")
        self.expect("PUNCT", "[")
        qids: list[int] = []
        if self.peek().value != "]":
            qids.append(self.question_ref())
            while self.peek().value == ",":
                self.next()
                qids.append(self.question_ref())
        self.expect("PUNCT", "]")
        self.expect("PUNCT", ",")
        vis = self.expect("NAME", what="visibility token")
        if vis.value != "all":
            self.fail(vis, f"unknown visibility token {vis.value!r}", "use 'all'")
        self.expect("PUNCT", ")")
        self.expect("END", what="'.'")
        self.sessions.append((SessionDecl(sid, tuple(qids), "all"), start))

    def term(self) -> Term:
        tok = self.next()
        if tok.kind == "VAR":
            return Variable(tok.value)
        if tok.kind == "NAME":
            if self.peek().value == "(":
                self.next()
                args = [self.term()]
                while self.peek().value == ",":
                    self.next()
                    args.append(self.term())
                self.expect("PUNCT", ")")
                return Compound(tok.value, tuple(args))
            return Constant(tok.value)
        self.fail(
            tok,
            f"expected a term, found {tok.value!r}",
            "terms are lowercase constants, Uppercase variables or functor(args)",
        )

    def literal(self) -> Literal:
        positive = True
        if self.peek().value == "-":
            self.next()
            positive = False
        name_tok = self.expect("NAME", what="predicate name")
        args: list[Term] = []
        if self.peek().value == "(":
            self.next()
            args.append(self.term())
            while self.peek().value == ",":
                self.next()
                args.append(self.term())
            self.expect("PUNCT", ")")
        return Literal(positive, name_tok.value, tuple(args))

    def timepoint(self):
        tok = self.peek()
        if tok.kind == "NAME" and tok.value == "always":
            self.next()
            return ALWAYS
        if tok.kind == "INT":
            self.next()
            return At(int(tok.value))
        self.fail(
            tok,
            f"expected a time-point, found {tok.value!r}",
            "use a non-negative integer or 'always'",
        )

    def statement_clause(self) -> None:
        start = self.peek()
        sid = self.session_ref()
        self.expect("PUNCT", "::")
        lit = self.literal()
        at_tok = self.expect("NAME", "at")
        when = self.timepoint()
        self.expect("END", what="'.'")
        if sid == 0 and isinstance(when, At):
            self.fail(
                at_tok,
                "session 0 holds typing information only",
                "use 'at always' or move the statement to a timed session",
            )
        if sid > 0 and not isinstance(when, At):
            self.fail(
                at_tok,
                "timed sessions require a numeric time-point",
                "replace 'always' with an integer time-point",
            )
        self.statements.append((StoryStatement(sid, lit, when), start))

    def question_clause(self) -> None:
        start = self.peek()
        qid = self.question_ref()
        self.expect("PUNCT", "??")
        choices: list[tuple[Literal, At]] = []
        while True:
            lit = self.literal()
            at_tok = self.expect("NAME", "at")
            when = self.timepoint()
            if not isinstance(when, At):
                self.fail(
                    at_tok,
                    "question choices must use a numeric time-point",
                    "replace 'always' with an integer time-point",
                )
            choices.append((lit, when))
            if self.peek().value == ";":
                self.next()
                continue
            break
        self.expect("END", what="'.'")
        self.questions.append((Question(qid, tuple(choices)), start))

    def fluents_clause(self) -> None:
        start = self.next()  # fluents
        self.expect("PUNCT", "(")
        self.expect("PUNCT", "[")
        if self.peek().value != "]":
            self.fluent_item(start)
            while self.peek().value == ",":
                self.next()
                self.fluent_item(start)
        self.expect("PUNCT", "]")
        self.expect("PUNCT", ")")
        self.expect("END", what="'.'")

    def fluent_item(self, clause_tok: _Token) -> None:
        name_tok = self.expect("NAME", what="fluent name")
        arity = 0
        if self.peek().value == "(":
            self.next()
            while True:
                slot = self.next()
                if slot.kind != "VAR" or slot.value != "_":
                    self.fail(
                        slot,
                        "fluent declarations use '_' placeholders only",
                        "declare the shape, e.g. do_want(_,_)",
                    )
                arity += 1
                if self.peek().value == ",":
                    self.next()
                    continue
                break
            self.expect("PUNCT", ")")
        self.fluents.append((FluentDecl(name_tok.value, arity), name_tok))

    def rule_label(self) -> RuleLabel:
        tok = self.expect("NAME", what="rule label")
        kind = {"c": "causal", "p": "property"}.get(tok.value)
        if kind is None:
            self.fail(tok, f"unknown rule label kind {tok.value!r}", "rule labels are c(N) or p(N)")
        self.expect("PUNCT", "(")
        index = self.int_value("rule index")
        self.expect("PUNCT", ")")
        return RuleLabel(kind, index)

    def rule_or_priority_clause(self) -> None:
        start = self.peek()
        label = self.rule_label()
        op = self.next()
        if op.value == ">>":
            weaker = self.rule_label()
            self.expect("END", what="'.'")
            if label == weaker:
                self.fail(start, "a rule cannot be stronger than itself", "remove the priority")
            self.priorities.append((Priority(label, weaker), start))
            return
        if op.value != "::":
            self.fail(op, f"expected '::' or '>>', found {op.value!r}", "rules read label :: body causes/implies head")
        body: list[Literal] = []
        if self.peek().kind == "NAME" and self.peek().value == "true" and self.peek(1).value in ("causes", "implies"):
            self.next()
        else:
            body.append(self.literal())
            while self.peek().value == ",":
                self.next()
                body.append(self.literal())
        conn = self.expect("NAME", what="'causes' or 'implies'")
        if conn.value not in ("causes", "implies"):
            self.fail(
                conn,
                f"expected 'causes' or 'implies', found {conn.value!r}",
                "causal rules use 'causes', property rules 'implies'",
            )
        head = self.literal()
        tail = self.peek()
        if tail.value == ",":
            self.fail(
                tail,
                "rule must have exactly one head literal",
                "keep a single literal after the connective; split the rule otherwise",
            )
        self.expect("END", what="'.'")
        kind = "causal" if conn.value == "causes" else "property"
        if kind != label.kind:
            self.fail(
                conn,
                f"label {canonical_text(label)} does not match connective {conn.value!r}",
                "c(N) rules use 'causes', p(N) rules use 'implies'",
            )
        self.rules.append((Rule(label, tuple(body), head), start))


def _semantic_diagnostics(p: _Parser) -> list[Diagnostic]:
    diags: list[Diagnostic] = []

    def err(tok: _Token, message: str, hint: str) -> None:
        diags.append(Diagnostic("error", tok.line, tok.column, message, hint))

    session_ids = [s.id for s, _ in p.sessions]
    seen: set[int] = set()
    for decl, tok in p.sessions:
        if decl.id in seen:
            err(tok, f"duplicate session s({decl.id})", "merge the two declarations")
        seen.add(decl.id)
    if sorted(seen) != list(range(len(seen))):
        if p.sessions:
            tok = p.sessions[0][1]
            err(
                tok,
                "session ids must be consecutive from 0",
                "declare session(s(0),[],all) first and number the rest in order",
            )
    qids = {q.id for q, _ in p.questions}
    dup_q: set[int] = set()
    for q, tok in p.questions:
        if q.id in dup_q:
            err(tok, f"duplicate question q({q.id})", "renumber one of the questions")
        dup_q.add(q.id)
    for decl, tok in p.sessions:
        for qid in decl.questions:
            if qid not in qids:
                err(
                    tok,
                    f"session s({decl.id}) references unknown question q({qid})",
                    "declare the question or drop it from the session list",
                )
    for stmt, tok in p.statements:
        if stmt.session not in seen:
            err(
                tok,
                f"statement references undeclared session s({stmt.session})",
                f"add session(s({stmt.session}),[],all) before the statement",
            )
    labels: set[RuleLabel] = set()
    for rule, tok in p.rules:
        if rule.label in labels:
            err(
                tok,
                f"duplicate rule label {canonical_text(rule.label)}",
                "give each rule a unique index",
            )
        labels.add(rule.label)
    for prio, tok in p.priorities:
        for side in (prio.stronger, prio.weaker):
            if side not in labels:
                err(
                    tok,
                    f"priority references undeclared rule {canonical_text(side)}",
                    "declare the rule before ordering it",
                )
    fl_seen: set[tuple[str, int]] = set()
    for decl, tok in p.fluents:
        key = (decl.name, decl.arity)
        if key in fl_seen:
            err(tok, f"duplicate fluent declaration {decl.signature}", "declare each fluent shape once")
        fl_seen.add(key)
    return diags


def _parse(source: str, story_only: bool) -> ParseResult:
    try:
        tokens = _tokenize(source)
    except _ParseError as exc:
        return ParseResult(None, [Diagnostic("error", exc.line, exc.column, exc.message, exc.hint)])
    parser = _Parser(tokens, story_only)
    diagnostics: list[Diagnostic] = []
    while parser.peek().kind != "EOF":
        try:
            parser.clause()
        except _ParseError as exc:
            diagnostics.append(Diagnostic("error", exc.line, exc.column, exc.message, exc.hint))
            parser.skip_to_clause_end()
    diagnostics.extend(_semantic_diagnostics(parser))
    if any(d.severity == "error" for d in diagnostics):
        return ParseResult(None, diagnostics)
    domain = Domain(
        sessions=tuple(s for s, _ in parser.sessions),
        statements=tuple(s for s, _ in parser.statements),
        questions=tuple(q for q, _ in parser.questions),
        fluents=tuple(f for f, _ in parser.fluents),
        rules=tuple(r for r, _ in parser.rules),
        priorities=tuple(p for p, _ in parser.priorities),
    )
    return ParseResult(domain, diagnostics)


def parse_domain(source: str) -> ParseResult:
    """Parse a full domain file (story plus background knowledge)."""
    return _parse(source, story_only=False)


def parse_story_only(source: str) -> ParseResult:
    """Parse the story pane; knowledge clauses are rejected with an error."""
    return _parse(source, story_only=True)


def format_domain(domain: Domain) -> str:
    """Stable pretty-printer; formatting twice is byte-identical."""
    return canonical_text(domain)


def parse_term(source: str) -> Term:
    """Parse a single term, e.g. ``P1`` or ``do(favor1)``."""
    parser = _Parser(_tokenize(source), story_only=False)
    term = parser.term()
    trailing = parser.peek()
    if trailing.kind != "EOF":
        raise ValueError(f"unexpected input after term: {trailing.value!r}")
    return term


def parse_literal(source: str) -> Literal:
    """Parse a single literal, e.g. ``-carried_out(favor1)``."""
    parser = _Parser(_tokenize(source), story_only=False)
    literal = parser.literal()
    trailing = parser.peek()
    if trailing.kind != "EOF":
        raise ValueError(f"unexpected input after literal: {trailing.value!r}")
    return literal
