"""Tokenizer shared by the expression grammar and the workspace DSL."""

from __future__ import annotations

import re
from dataclasses import dataclass

from .errors import DslSyntaxError

_TOKEN_RE = re.compile(r"""
    (?P<comment>\#[^\n]*)
  | (?P<newline>\n)
  | (?P<ws>[ \t\r]+)
  | (?P<arrow>->)
  | (?P<num>-?\d+(?:\.\d+)?(?:/\d+)?)
  | (?P<name>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<sym>[{}()\[\];:,='!&|^])
""", re.VERBOSE)

_OPEN, _CLOSE = "([{", ")]}"


@dataclass(frozen=True)
class Token:
    kind: str  # name | num | sym | newline | eof
    text: str
    line: int
    column: int


def tokenize(text: str) -> list:
    """Split ``text`` into tokens; newlines inside brackets are dropped."""
    tokens = []
    line, line_start, depth, pos = 1, 0, 0, 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        col = pos - line_start + 1
        if m is None:
            raise DslSyntaxError(f"unexpected character {text[pos]!r}", line, col)
        kind = m.lastgroup
        value = m.group()
        pos = m.end()
        if kind == "newline":
            if depth == 0:
                tokens.append(Token("newline", "\n", line, col))
            line += 1
            line_start = pos
            continue
        if kind in ("ws", "comment"):
            continue
        if kind == "arrow":
            kind = "sym"
        if kind == "sym":
            if value in _OPEN:
                depth += 1
            elif value in _CLOSE:
                depth = max(depth - 1, 0)
        tokens.append(Token(kind, value, line, col))
    tokens.append(Token("eof", "", line, pos - line_start + 1))
    return tokens


class TokenStream:
    def __init__(self, tokens):
        self.tokens = tokens
        self.pos = 0

    def peek(self, offset=0) -> Token:
        return self.tokens[min(self.pos + offset, len(self.tokens) - 1)]

    def next(self) -> Token:
        tok = self.peek()
        if tok.kind != "eof":
            self.pos += 1
        return tok

    def at(self, text, offset=0) -> bool:
        tok = self.peek(offset)
        return tok.kind in ("sym", "name") and tok.text == text

    def accept(self, text) -> bool:
        if self.at(text):
            self.pos += 1
            return True
        return False

    def expect(self, text) -> Token:
        tok = self.peek()
        if not self.at(text):
            raise self.error(f"expected {text!r}, found {tok.text or 'end of input'!r}", tok)
        return self.next()

    def expect_kind(self, kind, what=None) -> Token:
        tok = self.peek()
        if tok.kind != kind:
            raise self.error(f"expected {what or kind}, found {tok.text or 'end of input'!r}", tok)
        return self.next()

    def skip_newlines(self):
        while self.peek().kind == "newline":
            self.pos += 1

    def error(self, message, tok=None, cls=DslSyntaxError):
        tok = tok or self.peek()
        return cls(message, tok.line, tok.column)
