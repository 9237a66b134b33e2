"""Shared tokenizing for the line-oriented text formats."""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterator

NAME_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_']*\Z")


class ParseError(ValueError):
    """Syntax or reference error at a 1-based (line, column) position."""

    def __init__(self, message: str, line: int = 0, col: int = 0):
        self.message = message
        self.line = line
        self.col = col
        where = f"line {line}, column {col}: " if line else ""
        super().__init__(where + message)


@dataclass(frozen=True)
class Token:
    value: str
    line: int
    col: int


def strip_comment(line: str) -> str:
    i = line.find("#")
    return line if i < 0 else line[:i]


def tokenize_line(line: str, lineno: int) -> list[Token]:
    body = strip_comment(line)
    return [Token(m.group(), lineno, m.start() + 1) for m in re.finditer(r"\S+", body)]


def logical_lines(text: str) -> Iterator[list[Token]]:
    """Non-empty token lists, one per source line, comments removed."""
    for lineno, line in enumerate(text.splitlines(), start=1):
        toks = tokenize_line(line, lineno)
        if toks:
            yield toks


def check_header(lines: list[list[Token]], *words: str) -> None:
    want = " ".join(words)
    if not lines:
        raise ParseError(f"empty input, expected header '{want}'", 1, 1)
    first = lines[0]
    if [t.value for t in first] != list(words):
        raise ParseError(f"expected header '{want}'", first[0].line, first[0].col)


def check_name(tok: Token, what: str = "name") -> str:
    if not NAME_RE.match(tok.value):
        raise ParseError(f"invalid {what} {tok.value!r}", tok.line, tok.col)
    return tok.value


class TokenStream:
    """Flat token stream across lines, for formats with free-flowing tables."""

    def __init__(self, text: str):
        self.tokens = [t for toks in logical_lines(text) for t in toks]
        self.pos = 0
        self.line = 1

    def at_end(self) -> bool:
        return self.pos >= len(self.tokens)

    def next(self) -> Token:
        if self.at_end():
            raise ParseError("unexpected end of input", self.line, 1)
        tok = self.tokens[self.pos]
        self.pos += 1
        self.line = tok.line
        return tok

    def next_int(self) -> int:
        tok = self.next()
        try:
            return int(tok.value)
        except ValueError:
            raise ParseError(f"expected an integer, got {tok.value!r}", tok.line, tok.col) from None

    def expect_header(self, *words: str) -> None:
        if self.at_end():
            raise ParseError(f"empty input, expected header '{' '.join(words)}'", 1, 1)
        for w in words:
            tok = self.next()
            if tok.value != w:
                raise ParseError(f"expected header '{' '.join(words)}'", tok.line, tok.col)
