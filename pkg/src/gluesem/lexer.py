"""Tokenizer shared by the term, lexicon, and f-structure parsers."""

from __future__ import annotations

from dataclasses import dataclass

from .errors import SyntaxErrorAt

_SYMBOLS = ("->", "-o", "~>", "(", ")", "[", "]", "{", "}", ";", ":", ",", ".", "\\", "*", "^", "_")


@dataclass(frozen=True)
class Token:
    kind: str  # IDENT | QUOTED | symbol text | EOF
    text: str
    line: int
    column: int


def tokenize(text: str, source: str | None = None) -> list[Token]:
    tokens: list[Token] = []
    line, col = 1, 1
    i = 0
    n = len(text)
    while i < n:
        c = text[i]
        if c == "\n":
            line += 1
            col = 1
            i += 1
            continue
        if c.isspace():
            i += 1
            col += 1
            continue
        if c == "#":  # comment to end of line
            while i < n and text[i] != "\n":
                i += 1
            continue
        if c == "'":
            j = i + 1
            while j < n and text[j] not in "'\n":
                j += 1
            if j >= n or text[j] != "'":
                raise SyntaxErrorAt("unterminated quoted symbol", line, col, source)
            tokens.append(Token("QUOTED", text[i + 1 : j], line, col))
            col += j + 1 - i
            i = j + 1
            continue
        if c.isalpha():
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            tokens.append(Token("IDENT", text[i:j], line, col))
            col += j - i
            i = j
            continue
        for sym in _SYMBOLS:
            if text.startswith(sym, i):
                tokens.append(Token(sym, sym, line, col))
                i += len(sym)
                col += len(sym)
                break
        else:
            raise SyntaxErrorAt(f"unexpected character {c!r}", line, col, source)
    tokens.append(Token("EOF", "", line, col))
    return tokens


class TokenStream:
    def __init__(self, tokens: list[Token], source: str | None = None):
        self.tokens = tokens
        self.pos = 0
        self.source = source

    def peek(self, offset: int = 0) -> Token:
        return self.tokens[min(self.pos + offset, len(self.tokens) - 1)]

    def next(self) -> Token:
        tok = self.peek()
        if tok.kind != "EOF":
            self.pos += 1
        return tok

    def accept(self, kind: str) -> Token | None:
        if self.peek().kind == kind:
            return self.next()
        return None

    def expect(self, kind: str, what: str | None = None) -> Token:
        tok = self.peek()
        if tok.kind != kind:
            want = what or f"'{kind}'"
            got = tok.text if tok.kind != "EOF" else "end of input"
            self.fail(f"expected {want}, found {got!r}" if tok.kind != "EOF"
                      else f"expected {want}, found end of input", tok)
        return self.next()

    def at_end(self) -> bool:
        return self.peek().kind == "EOF"

    def fail(self, message: str, tok: Token | None = None):
        tok = tok or self.peek()
        raise SyntaxErrorAt(message, tok.line, tok.column, self.source)
