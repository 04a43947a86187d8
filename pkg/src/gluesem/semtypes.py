"""Semantic types: the base types e and t, and right-associative arrows."""

from __future__ import annotations

from dataclasses import dataclass

from .errors import SyntaxErrorAt


@dataclass(frozen=True)
class SemType:
    pass


@dataclass(frozen=True)
class BaseType(SemType):
    name: str

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class ArrowType(SemType):
    arg: SemType
    result: SemType

    def __str__(self) -> str:
        left = f"({self.arg})" if isinstance(self.arg, ArrowType) else str(self.arg)
        return f"{left} -> {self.result}"


E = BaseType("e")
T = BaseType("t")


def arrow(*types: SemType) -> SemType:
    """Build a right-associated arrow type from its components."""
    if not types:
        raise ValueError("arrow() needs at least one type")
    result = types[-1]
    for ty in reversed(types[:-1]):
        result = ArrowType(ty, result)
    return result


def arity(ty: SemType) -> int:
    n = 0
    while isinstance(ty, ArrowType):
        n += 1
        ty = ty.result
    return n


def parse_type(text: str) -> SemType:
    """Parse `e`, `t`, `e -> t`, `(e -> t) -> t` (arrows right-associative)."""
    tokens = _tokenize_type(text)
    ty, pos = _parse_arrow(tokens, 0, text)
    if pos != len(tokens):
        tok = tokens[pos]
        raise SyntaxErrorAt(f"unexpected '{tok[0]}' in type", 1, tok[1] + 1)
    return ty


def _tokenize_type(text: str) -> list[tuple[str, int]]:
    tokens = []
    i = 0
    while i < len(text):
        c = text[i]
        if c.isspace():
            i += 1
        elif c in "()":
            tokens.append((c, i))
            i += 1
        elif text.startswith("->", i):
            tokens.append(("->", i))
            i += 2
        elif c.isalpha():
            j = i
            while j < len(text) and (text[j].isalnum() or text[j] == "_"):
                j += 1
            tokens.append((text[i:j], i))
            i = j
        else:
            raise SyntaxErrorAt(f"bad character {c!r} in type", 1, i + 1)
    return tokens


def _parse_arrow(tokens, pos, text) -> tuple[SemType, int]:
    left, pos = _parse_type_atom(tokens, pos, text)
    if pos < len(tokens) and tokens[pos][0] == "->":
        right, pos = _parse_arrow(tokens, pos + 1, text)
        return ArrowType(left, right), pos
    return left, pos


def _parse_type_atom(tokens, pos, text) -> tuple[SemType, int]:
    if pos >= len(tokens):
        raise SyntaxErrorAt("type ended unexpectedly", 1, len(text) + 1)
    tok, col = tokens[pos]
    if tok == "(":
        ty, pos = _parse_arrow(tokens, pos + 1, text)
        if pos >= len(tokens) or tokens[pos][0] != ")":
            raise SyntaxErrorAt("unclosed '(' in type", 1, col + 1)
        return ty, pos + 1
    if tok in ("->", ")"):
        raise SyntaxErrorAt(f"unexpected '{tok}' in type", 1, col + 1)
    return BaseType(tok), pos + 1
