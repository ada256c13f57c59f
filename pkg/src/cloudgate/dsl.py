"""Textual goal-model format: tokenizer, recursive-descent parser, printer.

Nesting encodes the graph: a goal inside a goal is AND-decomposition, an
obstacle inside a goal is an obstruction, an obstacle inside an obstacle is a
refinement, and a tactic inside an obstacle is a resolution. The canonical
printer uses two-space indentation and insertion order, so format(parse(x))
is a fixed point.

Grammar (whitespace-insensitive tokens, ``#`` comments to end of line)::

    model    := "model" STRING "migration" ("I"|"II"|"III"|"IV"|"V") goal*
    goal     := "goal" [GID] STRING [block]
    block    := "{" (goal | obstacle | tactic)* "}"
    obstacle := "obstacle" (OID | "domain" ["of" OID]) STRING [riskc] [block]
    riskc    := "risk" "(" LIKELIHOOD "," CONSEQUENCE ["," "override" "=" LEVEL] ")"
    tactic   := "tactic" TID [STRING] ["note" STRING]
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import List, Optional

from .errors import ModelError, ParseError
from .model import GoalModel, GoalPattern, MigrationType, Origin
from .repository import Repository
from .risk import Consequence, Likelihood, RiskLevel, make_assessment

_WORD_RE = re.compile(r"[A-Za-z][A-Za-z0-9-]*")
_GID_RE = re.compile(r"^G[0-9]+$")
_OID_RE = re.compile(r"^O[0-9]+$")
_TID_RE = re.compile(r"^T[0-9]+$")
_GOAL_NAME_RE = re.compile(r"^(Achieve|Maintain|Avoid)\s*\[(.+)\]$", re.DOTALL)

_LIKELIHOODS = {l.value: l for l in Likelihood}
_CONSEQUENCES = {c.value: c for c in Consequence}
_LEVELS = {r.value: r for r in RiskLevel}

OVERRIDE_NOTE = "override recorded in model text"


@dataclass(frozen=True)
class Token:
    kind: str  # WORD STRING LBRACE RBRACE LPAREN RPAREN COMMA EQUALS EOF
    value: str
    line: int
    column: int


_PUNCT = {"{": "LBRACE", "}": "RBRACE", "(": "LPAREN", ")": "RPAREN",
          ",": "COMMA", "=": "EQUALS"}


def tokenize(text: str) -> List[Token]:
    tokens: List[Token] = []
    line, col = 1, 1
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch == "\n":
            line += 1
            col = 1
            i += 1
            continue
        if ch in " \t\r":
            i += 1
            col += 1
            continue
        if ch == "#":
            while i < n and text[i] != "\n":
                i += 1
            continue
        if ch in _PUNCT:
            tokens.append(Token(_PUNCT[ch], ch, line, col))
            i += 1
            col += 1
            continue
        if ch == '"':
            start_line, start_col = line, col
            i += 1
            col += 1
            out = []
            while True:
                if i >= n:
                    raise ParseError("unterminated string", start_line, start_col)
                ch = text[i]
                if ch == "\n":
                    raise ParseError("unterminated string", start_line, start_col)
                if ch == '"':
                    i += 1
                    col += 1
                    break
                if ch == "\\":
                    if i + 1 >= n:
                        raise ParseError("unterminated string", start_line, start_col)
                    esc = text[i + 1]
                    if esc == "n":
                        out.append("\n")
                    elif esc == '"':
                        out.append('"')
                    elif esc == "\\":
                        out.append("\\")
                    else:
                        raise ParseError(f"unknown escape '\\{esc}'", line, col)
                    i += 2
                    col += 2
                    continue
                out.append(ch)
                i += 1
                col += 1
            tokens.append(Token("STRING", "".join(out), start_line, start_col))
            continue
        m = _WORD_RE.match(text, i)
        if m:
            word = m.group(0)
            tokens.append(Token("WORD", word, line, col))
            i = m.end()
            col += len(word)
            continue
        raise ParseError(f"unexpected character {ch!r}", line, col)
    tokens.append(Token("EOF", "", line, col))
    return tokens


class _Parser:
    def __init__(self, tokens: List[Token], repository: Optional[Repository]):
        self.tokens = tokens
        self.pos = 0
        self.repository = repository

    def peek(self) -> Token:
        return self.tokens[self.pos]

    def next(self) -> Token:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def fail(self, message: str, tok: Optional[Token] = None):
        tok = tok or self.peek()
        raise ParseError(message, tok.line, tok.column)

    def expect_word(self, word: str) -> Token:
        tok = self.peek()
        if tok.kind != "WORD" or tok.value != word:
            self.fail(f"expected '{word}'", tok)
        return self.next()

    def expect_string(self, what: str) -> Token:
        tok = self.peek()
        if tok.kind != "STRING":
            self.fail(f"expected {what} string", tok)
        return self.next()

    def at_word(self, word: str) -> bool:
        tok = self.peek()
        return tok.kind == "WORD" and tok.value == word

    def guard(self, fn, tok: Token):
        """Run a model mutation, converting its errors to located parse errors."""
        try:
            return fn()
        except ModelError as exc:
            raise ParseError(str(exc), tok.line, tok.column) from exc

    def parse_model(self) -> GoalModel:
        self.expect_word("model")
        name_tok = self.expect_string("model name")
        if not name_tok.value:
            self.fail("model name must be non-empty", name_tok)
        self.expect_word("migration")
        type_tok = self.peek()
        if type_tok.kind != "WORD" or type_tok.value not in \
                MigrationType.__members__:
            self.fail("expected a migration type (I, II, III, IV, or V)", type_tok)
        self.next()
        model = GoalModel(name_tok.value, MigrationType[type_tok.value],
                          self.repository)
        while not self.peek().kind == "EOF":
            tok = self.peek()
            if self.at_word("goal"):
                self.parse_goal(model, parent=None)
            elif tok.kind == "WORD" and tok.value in ("obstacle", "tactic"):
                self.fail("only goals may appear at the top level", tok)
            else:
                self.fail("expected a goal declaration", tok)
        return model

    def parse_goal(self, model: GoalModel, parent: Optional[str]) -> None:
        kw = self.expect_word("goal")
        repo_ref = None
        tok = self.peek()
        if tok.kind == "WORD":
            if _GID_RE.match(tok.value):
                repo_ref = self.next().value
            else:
                self.fail("expected a goal id (G + digits) or a goal name", tok)
        name_tok = self.expect_string("goal name")
        m = _GOAL_NAME_RE.match(name_tok.value)
        if not m or not m.group(2).strip():
            self.fail('goal name must look like "Achieve [<descriptor>]" '
                      "(or Maintain/Avoid)", name_tok)
        pattern = GoalPattern(m.group(1))
        descriptor = m.group(2).strip()
        node_id = self.guard(
            lambda: model.add_goal(pattern, descriptor, repo_ref, parent), kw)
        if self.peek().kind == "LBRACE":
            self.next()
            while self.peek().kind != "RBRACE":
                tok = self.peek()
                if self.at_word("goal"):
                    self.parse_goal(model, parent=node_id)
                elif self.at_word("obstacle"):
                    self.parse_obstacle(model, target=node_id, in_goal=True)
                elif self.at_word("tactic"):
                    self.fail("a tactic must be nested inside an obstacle", tok)
                else:
                    self.fail("expected goal, obstacle, or '}'", tok)
            self.next()

    def parse_obstacle(self, model: GoalModel, target: str, in_goal: bool) -> None:
        kw = self.expect_word("obstacle")
        tok = self.peek()
        origin: Origin
        if tok.kind == "WORD" and tok.value == "domain":
            self.next()
            ancestor = None
            if self.at_word("of"):
                of_tok = self.next()
                ref = self.peek()
                if ref.kind != "WORD" or not _OID_RE.match(ref.value):
                    self.fail("expected an obstacle id (O + digits) after 'of'", ref)
                if in_goal:
                    self.fail("'domain of' requires an obstacle parent", of_tok)
                ancestor = self.next().value
            origin = Origin.domain(ancestor)
        elif tok.kind == "WORD" and _OID_RE.match(tok.value):
            origin = Origin.evidential(self.next().value)
        else:
            self.fail("expected an obstacle id (O + digits) or 'domain'", tok)
        name_tok = self.expect_string("obstacle name")
        if not name_tok.value.strip():
            self.fail("obstacle name must be non-empty", name_tok)
        node_id = self.guard(
            lambda: model.attach_obstacle(target, origin, name_tok.value), kw)
        if self.at_word("risk"):
            assessment = self.parse_risk()
            model.obstacle_nodes[node_id].assessment = assessment
        if self.peek().kind == "LBRACE":
            self.next()
            while self.peek().kind != "RBRACE":
                tok = self.peek()
                if self.at_word("obstacle"):
                    self.parse_obstacle(model, target=node_id, in_goal=False)
                elif self.at_word("tactic"):
                    self.parse_tactic(model, obstacle=node_id)
                elif self.at_word("goal"):
                    self.fail("a goal cannot be nested inside an obstacle", tok)
                else:
                    self.fail("expected obstacle, tactic, or '}'", tok)
            self.next()

    def parse_risk(self):
        self.expect_word("risk")
        if self.peek().kind != "LPAREN":
            self.fail("expected '(' after 'risk'")
        self.next()
        tok = self.peek()
        if tok.kind != "WORD" or tok.value not in _LIKELIHOODS:
            self.fail("expected a likelihood (rare, unlikely, possible, likely, "
                      "almost-certain)", tok)
        likelihood = _LIKELIHOODS[self.next().value]
        if self.peek().kind != "COMMA":
            self.fail("expected ','")
        self.next()
        tok = self.peek()
        if tok.kind != "WORD" or tok.value not in _CONSEQUENCES:
            self.fail("expected a consequence (insignificant, minor, moderate, "
                      "major, catastrophic)", tok)
        consequence = _CONSEQUENCES[self.next().value]
        override = None
        if self.peek().kind == "COMMA":
            self.next()
            self.expect_word("override")
            if self.peek().kind != "EQUALS":
                self.fail("expected '=' after 'override'")
            self.next()
            tok = self.peek()
            if tok.kind != "WORD" or tok.value not in _LEVELS:
                self.fail("expected a risk level (L, M, H, E, V)", tok)
            override = _LEVELS[self.next().value]
        if self.peek().kind != "RPAREN":
            self.fail("expected ')'")
        self.next()
        # the text format carries no assessment note; overrides get a marker
        return make_assessment(likelihood, consequence,
                               OVERRIDE_NOTE if override is not None else "",
                               override)

    def parse_tactic(self, model: GoalModel, obstacle: str) -> None:
        kw = self.expect_word("tactic")
        tok = self.peek()
        if tok.kind != "WORD" or not _TID_RE.match(tok.value):
            self.fail("expected a tactic id (T + digits)", tok)
        tid = self.next().value
        if self.peek().kind == "STRING":
            self.next()  # display label; the catalogue name is authoritative
        note = ""
        if self.at_word("note"):
            self.next()
            note = self.expect_string("note").value
        self.guard(lambda: model.attach_tactic(obstacle, tid, note), kw)


def parse_model_text(text: str, repository: Optional[Repository] = None) -> GoalModel:
    """Parse model text; errors carry a 1-based line:column location."""
    parser = _Parser(tokenize(text), repository)
    return parser.parse_model()


def _escape(value: str) -> str:
    return value.replace("\\", "\\\\").replace('"', '\\"').replace("\n", "\\n")


def _risk_clause(assessment) -> str:
    parts = f"{assessment.likelihood.value}, {assessment.consequence.value}"
    if assessment.override is not None:
        parts += f", override={assessment.override.value}"
    return f"risk({parts})"


def format_model_text(model: GoalModel) -> str:
    """Canonical text: 2-space indents, one declaration per line, idempotent."""
    violations = model.validate_structure()
    if violations:
        raise ModelError("cannot format an invalid model: " + "; ".join(violations))
    lines = [f'model "{_escape(model.name)}" migration '
             f"{model.migration_type.value}"]

    def emit_goal(node_id: str, depth: int):
        node = model.goal_nodes[node_id]
        indent = "  " * depth
        head = f"{indent}goal "
        if node.repo_ref:
            head += f"{node.repo_ref} "
        head += f'"{_escape(node.name)}"'
        if node.children or node.obstacles:
            lines.append(head + " {")
            for child in node.children:
                emit_goal(child, depth + 1)
            for obstacle in node.obstacles:
                emit_obstacle(obstacle, depth + 1)
            lines.append(indent + "}")
        else:
            lines.append(head)

    def emit_obstacle(node_id: str, depth: int):
        node = model.obstacle_nodes[node_id]
        indent = "  " * depth
        if node.origin.kind.value == "evidential":
            head = f"{indent}obstacle {node.origin.repo_ref} "
        else:
            head = f"{indent}obstacle domain "
        head += f'"{_escape(node.name)}"'
        if node.assessment is not None:
            head += " " + _risk_clause(node.assessment)
        if node.children or node.resolutions:
            lines.append(head + " {")
            for child in node.children:
                emit_obstacle(child, depth + 1)
            for tactic in node.resolutions:
                emit_tactic(tactic, depth + 1)
            lines.append(indent + "}")
        else:
            lines.append(head)

    def emit_tactic(node_id: str, depth: int):
        node = model.tactic_nodes[node_id]
        indent = "  " * depth
        head = f"{indent}tactic {node.repo_ref}"
        if model.repository is not None:
            entry = model.repository.tactic(node.repo_ref)
            if entry is not None:
                head += f' "{_escape(entry.name)}"'
        if node.note:
            head += f' note "{_escape(node.note)}"'
        lines.append(head)

    for root in model.root_goals:
        emit_goal(root, 0)
    return "\n".join(lines) + "\n"
