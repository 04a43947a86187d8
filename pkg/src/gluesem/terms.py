"""Simply-typed lambda terms for the meaning language.

Bound variables are de Bruijn indices (locally nameless): alpha-equivalence
is plain structural equality and substitution cannot capture. Binder names
survive only as printing hints, excluded from comparison.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .errors import TermTypeError, UnboundVariableError
from .semtypes import ArrowType, SemType


@dataclass(frozen=True)
class MeaningTerm:
    def __str__(self) -> str:
        return format_term(self)


@dataclass(frozen=True)
class Const(MeaningTerm):
    name: str
    ty: SemType


@dataclass(frozen=True)
class HypConst(MeaningTerm):
    """Fresh constant standing for a hypothetical referent in a derivation.

    A distinct node kind so a finished reading can be audited not to leak one.
    The stamp makes each introduction unique; the name is for display.
    """

    name: str
    ty: SemType
    stamp: int


@dataclass(frozen=True)
class Var(MeaningTerm):
    """Named variable: a template variable or a prover metavariable.

    Declared variables have stamp 0; freshened copies get a unique stamp and
    keep the declared name for display.
    """

    name: str
    ty: SemType
    stamp: int = 0


@dataclass(frozen=True)
class BoundVar(MeaningTerm):
    index: int


@dataclass(frozen=True)
class App(MeaningTerm):
    fun: MeaningTerm
    arg: MeaningTerm


@dataclass(frozen=True)
class Lam(MeaningTerm):
    var_type: SemType
    body: MeaningTerm
    hint: str = field(default="x", compare=False)


_fresh = itertools.count(1)


def fresh_stamp() -> int:
    return next(_fresh)


def fresh_var(base: str, ty: SemType) -> Var:
    return Var(base, ty, fresh_stamp())


def apply(fun: MeaningTerm, *args: MeaningTerm) -> MeaningTerm:
    for arg in args:
        fun = App(fun, arg)
    return fun


def spine(term: MeaningTerm) -> tuple[MeaningTerm, list[MeaningTerm]]:
    """Split nested applications into (head, [arg1, ..., argn])."""
    args: list[MeaningTerm] = []
    while isinstance(term, App):
        args.append(term.arg)
        term = term.fun
    args.reverse()
    return term, args


def subterms(term: MeaningTerm):
    yield term
    match term:
        case App(fun, arg):
            yield from subterms(fun)
            yield from subterms(arg)
        case Lam(_, body):
            yield from subterms(body)


def free_vars(term: MeaningTerm) -> frozenset[Var]:
    return frozenset(t for t in subterms(term) if isinstance(t, Var))


def hyp_consts(term: MeaningTerm) -> frozenset[HypConst]:
    return frozenset(t for t in subterms(term) if isinstance(t, HypConst))


def substitute(term: MeaningTerm, mapping: dict[Var, MeaningTerm]) -> MeaningTerm:
    """Replace named variables; replacements must be locally closed."""
    if not mapping:
        return term
    match term:
        case Var():
            return mapping.get(term, term)
        case App(fun, arg):
            return App(substitute(fun, mapping), substitute(arg, mapping))
        case Lam(ty, body, hint):
            return Lam(ty, substitute(body, mapping), hint)
        case _:
            return term


def typecheck(term: MeaningTerm, env: dict[str, SemType] | None = None) -> SemType:
    """Return the term's unique type.

    When `env` is given it must cover every free named variable, and carried
    types must agree with it.
    """
    return _typecheck(term, env, [])


def _typecheck(term, env, stack) -> SemType:
    match term:
        case Const(_, ty) | HypConst(_, ty, _):
            return ty
        case Var(name, ty, _):
            if env is not None:
                if name not in env:
                    raise UnboundVariableError(f"unbound variable {name}")
                if env[name] != ty:
                    raise TermTypeError(
                        f"variable {name} carries type {ty}, declared {env[name]}"
                    )
            return ty
        case BoundVar(index):
            if index >= len(stack):
                raise UnboundVariableError(f"dangling bound variable #{index}")
            return stack[index]
        case App(fun, arg):
            fun_ty = _typecheck(fun, env, stack)
            arg_ty = _typecheck(arg, env, stack)
            if not isinstance(fun_ty, ArrowType):
                raise TermTypeError(f"cannot apply a term of type {fun_ty}")
            if fun_ty.arg != arg_ty:
                raise TermTypeError(
                    f"argument type {arg_ty} does not match expected {fun_ty.arg}"
                )
            return fun_ty.result
        case Lam(var_type, body, _):
            return ArrowType(var_type, _typecheck(body, env, [var_type] + stack))
    raise TermTypeError(f"not a meaning term: {term!r}")


def open_binder(body: MeaningTerm, replacement: MeaningTerm) -> MeaningTerm:
    """Substitute `replacement` for the stripped binder's variable."""
    return _subst_index(body, replacement, 0)


def _shift(term, by, cutoff=0):
    match term:
        case BoundVar(index):
            return BoundVar(index + by) if index >= cutoff else term
        case App(fun, arg):
            return App(_shift(fun, by, cutoff), _shift(arg, by, cutoff))
        case Lam(ty, body, hint):
            return Lam(ty, _shift(body, by, cutoff + 1), hint)
        case _:
            return term


def _subst_index(term, replacement, depth):
    match term:
        case BoundVar(index):
            if index == depth:
                return _shift(replacement, depth)
            if index > depth:
                return BoundVar(index - 1)
            return term
        case App(fun, arg):
            return App(
                _subst_index(fun, replacement, depth),
                _subst_index(arg, replacement, depth),
            )
        case Lam(ty, body, hint):
            return Lam(ty, _subst_index(body, replacement, depth + 1), hint)
        case _:
            return term


def abstract_over(term: MeaningTerm, target: Var | HypConst, hint: str | None = None) -> Lam:
    """Lambda-abstract `term` over every occurrence of `target`."""

    def go(t, depth):
        if t == target:
            return BoundVar(depth)
        match t:
            case App(fun, arg):
                return App(go(fun, depth), go(arg, depth))
            case Lam(ty, body, h):
                return Lam(ty, go(body, depth + 1), h)
            case _:
                return t

    return Lam(target.ty, go(term, 0), hint or target.name)


def _occurs_index(term, target) -> bool:
    match term:
        case BoundVar(index):
            return index == target
        case App(fun, arg):
            return _occurs_index(fun, target) or _occurs_index(arg, target)
        case Lam(_, body):
            return _occurs_index(body, target + 1)
        case _:
            return False


def _strip_binder(term, depth=0):
    # Remove one enclosing binder: indices past `depth` shift down by one.
    match term:
        case BoundVar(index):
            return BoundVar(index - 1) if index > depth else term
        case App(fun, arg):
            return App(_strip_binder(fun, depth), _strip_binder(arg, depth))
        case Lam(ty, body, hint):
            return Lam(ty, _strip_binder(body, depth + 1), hint)
        case _:
            return term


def _beta(term):
    match term:
        case App(fun, arg):
            fun = _beta(fun)
            if isinstance(fun, Lam):
                return _beta(open_binder(fun.body, arg))
            return App(fun, _beta(arg))
        case Lam(ty, body, hint):
            return Lam(ty, _beta(body), hint)
        case _:
            return term


def _eta(term):
    # Assumes beta-normal input, where contraction cannot create a redex.
    match term:
        case App(fun, arg):
            return App(_eta(fun), _eta(arg))
        case Lam(ty, body, hint):
            body = _eta(body)
            if (
                isinstance(body, App)
                and body.arg == BoundVar(0)
                and not _occurs_index(body.fun, 0)
            ):
                return _strip_binder(body.fun)
            return Lam(ty, body, hint)
        case _:
            return term


def normalize(term: MeaningTerm) -> MeaningTerm:
    """Beta-normal form; terminates on every well-typed term.

    Abstractions are left as constructed (no eta rewriting), so normal forms
    read the way derivations build them; eta enters only through
    `equivalent`, which identifies terms up to it.
    """
    return _beta(term)


def canonical_form(term: MeaningTerm) -> MeaningTerm:
    """Eta-contracted beta-normal form: the representative used to decide
    alpha-beta-eta equivalence."""
    return _eta(_beta(term))


def equivalent(t1: MeaningTerm, t2: MeaningTerm) -> bool:
    """Alpha-beta-eta equivalence of two well-typed terms of the same type."""
    ty1 = typecheck(t1)
    ty2 = typecheck(t2)
    if ty1 != ty2:
        raise TermTypeError(f"cannot compare terms of types {ty1} and {ty2}")
    return canonical_form(t1) == canonical_form(t2)


def format_term(term: MeaningTerm) -> str:
    used = {t.name for t in subterms(term) if isinstance(t, (Const, Var, HypConst))}
    return _fmt(term, [], used)


def _pick_name(hint: str, taken) -> str:
    if hint not in taken:
        return hint
    for i in itertools.count(1):
        candidate = f"{hint}{i}"
        if candidate not in taken:
            return candidate
    raise AssertionError("unreachable")


def _fmt(term, stack, used) -> str:
    match term:
        case Const(name, _) | Var(name, _, _) | HypConst(name, _, _):
            return name
        case BoundVar(index):
            if index < len(stack):
                return stack[index]
            return f"#{index}"
        case App():
            head, args = spine(term)
            head_s = _fmt(head, stack, used)
            if isinstance(head, Lam):
                head_s = f"({head_s})"
            args_s = ", ".join(_fmt(a, stack, used) for a in args)
            return f"{head_s}({args_s})"
        case Lam(_, body, hint):
            name = _pick_name(hint, used | set(stack))
            return f"\\{name}. {_fmt(body, [name] + stack, used)}"
    return repr(term)
