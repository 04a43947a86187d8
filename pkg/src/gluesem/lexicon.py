"""The lexicon: meaning-constructor templates keyed by headword, their
instantiation against f-structure nodes, and premise collection.

Lexicon file format, one declaration per line::

    constant appoint : e -> e -> t
    appointed, appoint: forall X:e, Y:e. (^ SUBJ) ~> X * (^ OBJ) ~> Y -o ^ ~> appoint(X, Y)

`constant` lines build the signature that types the meaning side. An entry
line names one or more headwords (aliases for the same constructor, covering
word-form vs semantic-form naming like appointed/appoint), then a template:
`~>` relates a structure expression to a meaning, `~>_t` forces the type
index, `*` is multiplicative conjunction, `-o` linear implication
(right-associative), `forall v:τ.` binds a meaning variable and a bare
`forall H.` a structure variable. `^` is the word's own node, `(^ SUBJ)` a
path from it, `(mod ^)` the node whose MODS set contains it.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .errors import (
    MissingAttributeError,
    MissingEntryError,
    SyntaxErrorAt,
    TermTypeError,
    UninstantiableEntryError,
)
from .formulas import Atom, Forall, GlueFormula, Limp, MeaningVar, PathRef, SemVar, Tensor
from .fstruct import FStructure, sigma
from .lexer import Token, TokenStream, tokenize
from .semtypes import SemType
from .terms import Const, subterms, typecheck
from .termsyntax import parse_term_at, parse_type_at

_HEADWORD = re.compile(r"^[A-Za-z][A-Za-z0-9_-]*$")


@dataclass(frozen=True)
class LexicalEntry:
    headword: str
    aliases: tuple[str, ...]
    template: GlueFormula
    constants: dict[str, SemType] = field(compare=False)

    def __str__(self) -> str:
        return f"{self.headword}: {self.template}"


class Lexicon(dict):
    """Map from headword (and aliases) to LexicalEntry, plus the constant
    signature used to type meaning terms."""

    def __init__(self, signature: dict[str, SemType] | None = None):
        super().__init__()
        self.signature: dict[str, SemType] = dict(signature or {})


def parse_lexicon(text: str, source: str | None = None) -> Lexicon:
    lexicon = Lexicon()
    entries_pending: list[tuple[list[str], str, int, int]] = []
    for lineno, raw_line in enumerate(text.splitlines(), start=1):
        line = raw_line.split("#", 1)[0].rstrip()
        if not line.strip():
            continue
        if line.split(":", 1)[0].strip().startswith("constant "):
            _parse_constant_line(line, lineno, lexicon, source)
            continue
        if ":" not in line:
            raise SyntaxErrorAt("expected 'headword: template'", lineno, 1, source)
        head_part, template_part = line.split(":", 1)
        words = [w.strip() for w in head_part.split(",")]
        for word in words:
            if not _HEADWORD.match(word):
                raise SyntaxErrorAt(f"bad headword {word!r}", lineno, 1, source)
        # Constants may be declared anywhere in the file; parse templates after.
        entries_pending.append((words, template_part, lineno, len(head_part) + 1))
    for words, template_part, lineno, offset in entries_pending:
        template, constants = _parse_template(
            template_part, lineno, offset, lexicon.signature, source
        )
        entry = LexicalEntry(
            headword=words[0],
            aliases=tuple(words),
            template=template,
            constants=constants,
        )
        for word in words:
            key = word.casefold()
            if key in lexicon:
                raise SyntaxErrorAt(f"duplicate entry for '{word}'", lineno, 1, source)
            lexicon[key] = entry
    return lexicon


def _parse_constant_line(line: str, lineno: int, lexicon: Lexicon, source):
    body = line.strip()[len("constant") :]
    if ":" not in body:
        raise SyntaxErrorAt("expected 'constant name : type'", lineno, 1, source)
    name_part, type_part = body.split(":", 1)
    name = name_part.strip()
    if not re.match(r"^[A-Za-z][A-Za-z0-9_]*$", name):
        raise SyntaxErrorAt(f"bad constant name {name!r}", lineno, 1, source)
    if name in lexicon.signature:
        raise SyntaxErrorAt(f"duplicate constant '{name}'", lineno, 1, source)
    ts = _tokens_for(type_part, lineno, len(line) - len(type_part), source)
    ty = parse_type_at(ts)
    if not ts.at_end():
        ts.fail("trailing input after type")
    lexicon.signature[name] = ty


def _tokens_for(text: str, lineno: int, column_offset: int, source) -> TokenStream:
    padded = " " * column_offset + text
    tokens = [
        Token(t.kind, t.text, lineno, t.column) for t in tokenize(padded, source)
    ]
    return TokenStream(tokens, source)


class _TemplateParser:
    def __init__(self, ts: TokenStream, signature: dict[str, SemType]):
        self.ts = ts
        self.signature = signature
        self.meaning_scope: dict[str, SemType] = {}
        self.sem_scope: set[str] = set()

    def parse_formula(self) -> GlueFormula:
        if self.ts.peek().kind == "IDENT" and self.ts.peek().text == "forall":
            return self.parse_forall()
        return self.parse_limp()

    def parse_forall(self) -> GlueFormula:
        self.ts.expect("IDENT")  # 'forall'
        binders: list[object] = []
        while True:
            tok = self.ts.expect("IDENT", "a quantifier variable")
            name = tok.text
            if name in self.meaning_scope or name in self.sem_scope:
                self.ts.fail(f"variable '{name}' already bound", tok)
            if self.ts.accept(":"):
                ty = parse_type_at(self.ts)
                binders.append(MeaningVar(name, ty))
                self.meaning_scope[name] = ty
            else:
                binders.append(SemVar(name))
                self.sem_scope.add(name)
            if not self.ts.accept(","):
                break
        self.ts.expect(".")
        body = self.parse_formula()
        for binder in reversed(binders):
            body = Forall(binder, body)
            if isinstance(binder, MeaningVar):
                del self.meaning_scope[binder.name]
            else:
                self.sem_scope.discard(binder.name)
        return body

    def parse_limp(self) -> GlueFormula:
        left = self.parse_tensor()
        if self.ts.accept("-o"):
            return Limp(left, self.parse_formula())
        return left

    def parse_tensor(self) -> GlueFormula:
        left = self.parse_unit()
        if self.ts.accept("*"):
            return Tensor(left, self.parse_tensor())
        return left

    def parse_unit(self) -> GlueFormula:
        tok = self.ts.peek()
        if tok.kind == "(" and self.ts.peek(1).kind not in ("^",) and not (
            self.ts.peek(1).kind == "IDENT"
            and self.ts.peek(1).text == "mod"
            and self.ts.peek(2).kind == "^"
        ):
            self.ts.next()
            inner = self.parse_formula()
            self.ts.expect(")")
            return inner
        return self.parse_atom()

    def parse_atom(self) -> Atom:
        sem = self.parse_sem_expr()
        self.ts.expect("~>")
        explicit: SemType | None = None
        if self.ts.accept("_"):
            explicit = parse_type_at(self.ts)
        meaning = parse_term_at(self.ts, self.signature, self.meaning_scope)
        try:
            meaning_ty = typecheck(meaning)
        except TermTypeError as exc:
            self.ts.fail(f"ill-typed meaning side: {exc}")
        if explicit is not None and explicit != meaning_ty:
            self.ts.fail(
                f"type index {explicit} conflicts with meaning type {meaning_ty}"
            )
        return Atom(sem, explicit if explicit is not None else meaning_ty, meaning)

    def parse_sem_expr(self):
        if self.ts.accept("^"):
            return PathRef("up")
        if self.ts.peek().kind == "(":
            self.ts.next()
            if self.ts.peek().kind == "IDENT" and self.ts.peek().text == "mod":
                self.ts.next()
                self.ts.expect("^")
                self.ts.expect(")")
                return PathRef("mod")
            self.ts.expect("^")
            path = []
            while self.ts.peek().kind == "IDENT":
                path.append(self.ts.next().text.upper())
            self.ts.expect(")")
            if not path:
                return PathRef("up")
            return PathRef("up", tuple(path))
        tok = self.ts.expect("IDENT", "a structure expression")
        if tok.text not in self.sem_scope:
            self.ts.fail(f"unbound structure variable '{tok.text}'", tok)
        return SemVar(tok.text)


def _parse_template(text, lineno, column_offset, signature, source):
    ts = _tokens_for(text, lineno, column_offset, source)
    parser = _TemplateParser(ts, signature)
    template = parser.parse_formula()
    if not ts.at_end():
        ts.fail(f"unexpected {ts.peek().text!r} after template")
    unbound = template.free_meaning_vars()
    if unbound:
        names = ", ".join(sorted(v.name for v in unbound))
        raise SyntaxErrorAt(f"unbound template variable(s) {names}", lineno, 1, source)
    constants = {
        t.name: t.ty
        for atom in template.atoms()
        for t in subterms(atom.meaning)
        if isinstance(t, Const)
    }
    return template, constants


def instantiate(entry: LexicalEntry, node: FStructure) -> GlueFormula:
    """Resolve the template's paths at `node` and sigma-project them; the
    result is a closed formula with the template's connective shape."""

    def resolve(formula: GlueFormula) -> GlueFormula:
        match formula:
            case Atom(sem, ty, meaning):
                if isinstance(sem, PathRef):
                    return Atom(_resolve_ref(sem), ty, meaning)
                return formula
            case Tensor(left, right):
                return Tensor(resolve(left), resolve(right))
            case Limp(antecedent, consequent):
                return Limp(resolve(antecedent), resolve(consequent))
            case Forall(var, body):
                return Forall(var, resolve(body))
        return formula

    def _resolve_ref(ref: PathRef):
        if ref.anchor == "mod":
            container = node.mod_container
            if container is None:
                raise UninstantiableEntryError(entry.headword, node.label, "(mod ^)")
            return sigma(container)
        target = node
        if ref.path:
            try:
                target = _resolve_path_to_node(node, ref.path)
            except MissingAttributeError as exc:
                raise UninstantiableEntryError(
                    entry.headword, node.label, exc.attribute
                ) from exc
        return sigma(target)

    instantiated = resolve(entry.template)
    assert instantiated.is_closed(), "instantiation must produce a closed formula"
    return instantiated


def _resolve_path_to_node(node: FStructure, path) -> FStructure:
    current: object = node
    for attribute in path:
        if not isinstance(current, FStructure):
            raise MissingAttributeError(attribute, str(current))
        value = current.get(attribute)
        if value is None:
            raise MissingAttributeError(attribute, current.label)
        current = value
    if not isinstance(current, FStructure):
        raise MissingAttributeError(path[-1], node.label)
    return current


@dataclass(frozen=True)
class Premise:
    index: int  # 1-based position in document order
    formula: GlueFormula
    word: str  # contributing entry's headword
    label: str  # f-structure node the word heads

    def tag(self) -> str:
        return f"{self.word}[{self.index}]"

    def __str__(self) -> str:
        return f"[{self.index}] {self.word}: {self.formula}"


@dataclass(frozen=True)
class PremiseSet:
    premises: tuple[Premise, ...]

    def __iter__(self):
        return iter(self.premises)

    def __len__(self) -> int:
        return len(self.premises)

    def __str__(self) -> str:
        return "\n".join(str(p) for p in self.premises)


def entry_key(node: FStructure) -> str | None:
    """Lookup key for the word heading `node`: its PRED, prefixed by SPEC for
    pre-combined quantified nominals (every-candidate, a-manager)."""
    pred = node.get("PRED")
    if not isinstance(pred, str):
        return None
    spec = node.get("SPEC")
    if isinstance(spec, str):
        return f"{spec}-{pred}".casefold()
    return pred.casefold()


def premises(root: FStructure, lexicon: Lexicon) -> PremiseSet:
    """One instantiated premise per word occurrence (PRED-bearing node,
    including each MODS member), in document order."""
    out: list[Premise] = []
    for node in root.nodes():
        key = entry_key(node)
        if key is None:
            continue
        entry = lexicon.get(key)
        if entry is None:
            raise MissingEntryError(key, node.label)
        formula = instantiate(entry, node)
        out.append(Premise(len(out) + 1, formula, entry.headword, node.label))
    return PremiseSet(tuple(out))
