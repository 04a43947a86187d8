"""Linear-logic glue formulas: typed means-atoms, tensor, linear implication,
and universal quantification over meaning and semantic-structure variables.

Atoms relate a semantic-structure expression to a meaning term at a type
index. Before instantiation the structure side may be a path (`^`,
`(^ SUBJ)`, `(mod ^)`); afterwards only concrete structures and
quantifier-bound structure variables remain.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import terms
from .fstruct import SemStructure
from .semtypes import SemType
from .terms import MeaningTerm, Var


@dataclass(frozen=True)
class SemVar:
    """A quantifier-bound semantic-structure variable (a possible scope)."""

    name: str

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class PathRef:
    """Template-only structure expression: `^`, `(^ SUBJ OBJ)`, `(mod ^)`."""

    anchor: str  # "up" | "mod"
    path: tuple[str, ...] = ()

    def __str__(self) -> str:
        if self.anchor == "mod":
            return "(mod ^)"
        if not self.path:
            return "^"
        return f"(^ {' '.join(self.path)})"


@dataclass(frozen=True)
class MeaningVar:
    """Quantifier binder for a typed meaning variable."""

    name: str
    ty: SemType

    def __str__(self) -> str:
        return f"{self.name}:{self.ty}"


@dataclass(frozen=True)
class GlueFormula:
    def __str__(self) -> str:
        return format_formula(self)

    # --- structural helpers -------------------------------------------------

    def atoms(self):
        match self:
            case Atom():
                yield self
            case Tensor(left, right):
                yield from left.atoms()
                yield from right.atoms()
            case Limp(antecedent, consequent):
                yield from antecedent.atoms()
                yield from consequent.atoms()
            case Forall(_, body):
                yield from body.atoms()

    def connectives(self) -> int:
        match self:
            case Atom():
                return 0
            case Tensor(left, right) | Limp(left, right):
                return 1 + left.connectives() + right.connectives()
            case Forall(_, body):
                return 1 + body.connectives()
        return 0

    def substitute_sem(self, name: str, sem) -> "GlueFormula":
        """Replace the structure variable `name` with a concrete structure."""
        match self:
            case Atom(s, ty, meaning):
                if isinstance(s, SemVar) and s.name == name:
                    return Atom(sem, ty, meaning)
                return self
            case Tensor(left, right):
                return Tensor(left.substitute_sem(name, sem), right.substitute_sem(name, sem))
            case Limp(antecedent, consequent):
                return Limp(
                    antecedent.substitute_sem(name, sem),
                    consequent.substitute_sem(name, sem),
                )
            case Forall(var, body):
                if isinstance(var, SemVar) and var.name == name:
                    return self
                return Forall(var, body.substitute_sem(name, sem))
        return self

    def substitute_meanings(self, mapping: dict[Var, MeaningTerm]) -> "GlueFormula":
        match self:
            case Atom(sem, ty, meaning):
                return Atom(sem, ty, terms.substitute(meaning, mapping))
            case Tensor(left, right):
                return Tensor(
                    left.substitute_meanings(mapping), right.substitute_meanings(mapping)
                )
            case Limp(antecedent, consequent):
                return Limp(
                    antecedent.substitute_meanings(mapping),
                    consequent.substitute_meanings(mapping),
                )
            case Forall(var, body):
                if isinstance(var, MeaningVar):
                    mapping = {
                        v: t
                        for v, t in mapping.items()
                        if v != Var(var.name, var.ty)
                    }
                    if not mapping:
                        return self
                return Forall(var, body.substitute_meanings(mapping))
        return self

    def free_sem_vars(self, bound: frozenset[str] = frozenset()) -> frozenset[str]:
        match self:
            case Atom(sem, _, _):
                if isinstance(sem, SemVar) and sem.name not in bound:
                    return frozenset({sem.name})
                return frozenset()
            case Tensor(left, right) | Limp(left, right):
                return left.free_sem_vars(bound) | right.free_sem_vars(bound)
            case Forall(var, body):
                if isinstance(var, SemVar):
                    bound = bound | {var.name}
                return body.free_sem_vars(bound)
        return frozenset()

    def free_meaning_vars(self, bound: frozenset[Var] = frozenset()) -> frozenset[Var]:
        match self:
            case Atom(_, _, meaning):
                return terms.free_vars(meaning) - bound
            case Tensor(left, right) | Limp(left, right):
                return left.free_meaning_vars(bound) | right.free_meaning_vars(bound)
            case Forall(var, body):
                if isinstance(var, MeaningVar):
                    bound = bound | {Var(var.name, var.ty)}
                return body.free_meaning_vars(bound)
        return frozenset()

    def is_closed(self) -> bool:
        return not self.free_sem_vars() and not self.free_meaning_vars()


@dataclass(frozen=True)
class Atom(GlueFormula):
    sem: object  # SemStructure | SemVar | PathRef
    ty: SemType
    meaning: MeaningTerm


@dataclass(frozen=True)
class Tensor(GlueFormula):
    left: GlueFormula
    right: GlueFormula


@dataclass(frozen=True)
class Limp(GlueFormula):
    antecedent: GlueFormula
    consequent: GlueFormula


@dataclass(frozen=True)
class Forall(GlueFormula):
    var: object  # MeaningVar | SemVar
    body: GlueFormula


def tensor(*parts: GlueFormula) -> GlueFormula:
    if not parts:
        raise ValueError("tensor() needs at least one formula")
    result = parts[-1]
    for part in reversed(parts[:-1]):
        result = Tensor(part, result)
    return result


def flatten_tensor(formula: GlueFormula) -> list[GlueFormula]:
    if isinstance(formula, Tensor):
        return flatten_tensor(formula.left) + flatten_tensor(formula.right)
    return [formula]


def format_formula(formula: GlueFormula) -> str:
    match formula:
        case Atom(sem, ty, meaning):
            return f"{sem} ~>_{_fmt_index(ty)} {terms.format_term(meaning)}"
        case Tensor(left, right):
            return f"{_wrap(left)} * {_wrap(right)}"
        case Limp(antecedent, consequent):
            return f"{_wrap(antecedent)} -o {format_formula(consequent)}"
        case Forall():
            binders = []
            body = formula
            while isinstance(body, Forall):
                binders.append(str(body.var))
                body = body.body
            return f"forall {', '.join(binders)}. {format_formula(body)}"
    return repr(formula)


def _fmt_index(ty: SemType) -> str:
    text = str(ty)
    return f"({text})" if " " in text else text


def _wrap(formula: GlueFormula) -> str:
    if isinstance(formula, (Limp, Forall, Tensor)):
        return f"({format_formula(formula)})"
    return format_formula(formula)


__all__ = [
    "Atom",
    "Forall",
    "GlueFormula",
    "Limp",
    "MeaningVar",
    "PathRef",
    "SemStructure",
    "SemVar",
    "Tensor",
    "flatten_tensor",
    "format_formula",
    "tensor",
]
