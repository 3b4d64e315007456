"""Tokenizer shared by the K^c parser and the logic-program reader."""

from __future__ import annotations

import re
from dataclasses import dataclass

from ..errors import KcSyntaxError


@dataclass(frozen=True)
class Token:
    kind: str  # ID, VAR, INT, OP, EOF
    text: str
    line: int
    col: int

    def __str__(self) -> str:
        return self.text if self.kind != "EOF" else "end of input"


_TOKEN_RE = re.compile(
    r"""
    (?P<ws>[ \t\r\f\v]+)
  | (?P<nl>\n)
  | (?P<comment>%[^\n]*)
  | (?P<INT>\d+)
  | (?P<VAR>[A-Z_][A-Za-z0-9_]*)
  | (?P<ID>[a-z][A-Za-z0-9_]*)
  | (?P<OP>\#int|\#maxint|:-|:~|<=|>=|!=|<>|==|[():,.?\-=<>+*\[\]{}¬∨|;])
    """,
    re.VERBOSE,
)


def tokenize(text: str, source: str | None = None) -> list[Token]:
    tokens: list[Token] = []
    pos, line, line_start = 0, 1, 0
    n = len(text)
    while pos < n:
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise KcSyntaxError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1, source)
        kind = m.lastgroup
        col = pos - line_start + 1
        if kind == "nl":
            line += 1
            line_start = m.end()
        elif kind not in ("ws", "comment"):
            tok = m.group()
            if tok == "¬":
                tok = "-"
            elif tok == "<>":
                tok = "!="
            elif tok == "==":
                tok = "="
            tokens.append(Token(kind, tok, line, col))
        pos = m.end()
    tokens.append(Token("EOF", "", line, pos - line_start + 1))
    return tokens


class TokenStream:
    def __init__(self, tokens: list[Token], source: str | None = None):
        self.toks = tokens
        self.i = 0
        self.source = source

    @property
    def cur(self) -> Token:
        return self.toks[self.i]

    def peek(self, k: int = 1) -> Token:
        j = min(self.i + k, len(self.toks) - 1)
        return self.toks[j]

    def at(self, text: str) -> bool:
        t = self.cur
        return t.kind != "EOF" and t.text == text

    def at_kw(self, word: str) -> bool:
        return self.cur.kind == "ID" and self.cur.text == word

    def advance(self) -> Token:
        t = self.toks[self.i]
        if t.kind != "EOF":
            self.i += 1
        return t

    def accept(self, text: str) -> bool:
        if self.at(text):
            self.i += 1
            return True
        return False

    def expect(self, text: str) -> Token:
        if not self.at(text):
            self.error(f"expected {text!r}, found {self.cur}")
        return self.advance()

    def error(self, msg: str, tok: Token | None = None):
        t = tok or self.cur
        raise KcSyntaxError(msg, t.line, t.col, self.source)
