"""Tokenizer shared by the rule, machine-file and Turing-machine readers."""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import List, Optional

from .errors import TreeSyntaxError

_TOKEN = re.compile(
    r"""
    (?P<ws>\s+|--[^\n]*)
  | (?P<num>\#\d+)
  | (?P<int>\d+)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_']*)
  | (?P<punct>=>|->|[()\[\],.+*=|;:{}])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    pos: int


class Tokens:
    """Cursor over a token list with the usual peek/accept/expect helpers."""

    def __init__(self, text: str):
        self.text = text
        self.items: List[Token] = []
        pos = 0
        while pos < len(text):
            m = _TOKEN.match(text, pos)
            if not m:
                raise TreeSyntaxError(f"unexpected character {text[pos]!r}", pos, text)
            if m.lastgroup != "ws":
                self.items.append(Token(m.lastgroup, m.group(), pos))
            pos = m.end()
        self.items.append(Token("eof", "", len(text)))
        self.i = 0

    def peek(self, offset: int = 0) -> Token:
        return self.items[min(self.i + offset, len(self.items) - 1)]

    def next(self) -> Token:
        tok = self.items[self.i]
        if tok.kind != "eof":
            self.i += 1
        return tok

    def at(self, text: str) -> bool:
        tok = self.peek()
        return tok.text == text and tok.kind != "eof"

    def accept(self, text: str) -> Optional[Token]:
        if self.at(text):
            return self.next()
        return None

    def expect(self, text: str) -> Token:
        if not self.at(text):
            self.error(f"expected {text!r}")
        return self.next()

    def expect_kind(self, kind: str) -> Token:
        tok = self.peek()
        if tok.kind != kind:
            self.error(f"expected {kind}")
        return self.next()

    def error(self, message: str):
        tok = self.peek()
        found = tok.text or "end of input"
        raise TreeSyntaxError(f"{message}, found {found!r}", tok.pos, self.text)

    def done(self) -> bool:
        return self.peek().kind == "eof"
