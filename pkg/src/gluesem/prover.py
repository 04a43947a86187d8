"""Linear-logic proof search over a premise multiset.

Backward natural-deduction search with explicit resource threading: an atomic
goal is proved by focusing one available resource, proving the antecedents
collected along its implication spine (lazy tensor splitting falls out of
threading the availability set through those subproofs), and finally matching
the head against the goal. Universal meaning variables become metavariables
solved by pattern unification; universal structure variables range over the
finite structure universe of the analysis. Nested implication antecedents are
proved hypothetically: assume a fresh tagged constant, prove the inner
consequent consuming the assumption exactly once, discharge by abstraction.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .errors import GlueError, NonPatternError, SearchBoundError
from .formulas import Atom, Forall, GlueFormula, Limp, MeaningVar, Tensor, flatten_tensor
from .fstruct import SemStructure
from .lexicon import Premise, PremiseSet
from .semtypes import SemType, T
from .terms import (
    App,
    BoundVar,
    Const,
    HypConst,
    Lam,
    MeaningTerm,
    Var,
    abstract_over,
    canonical_form,
    format_term,
    free_vars,
    fresh_stamp,
    fresh_var,
    hyp_consts,
    normalize,
    spine,
    substitute,
    typecheck,
)


@dataclass(frozen=True)
class Goal:
    """Prove `sem ~>_ty M` for some term M, consuming every premise."""

    sem: SemStructure
    ty: SemType = T

    def __str__(self) -> str:
        return f"{self.sem} ~>_{self.ty} ?"


@dataclass(frozen=True)
class TraceStep:
    kind: str  # assume | apply | derive | discharge
    resource: int | str | None  # premise index or hypothesis id
    word: str  # premise headword or hypothesis constant name
    detail: str
    bindings: tuple[tuple[str, str], ...] = ()

    def line(self) -> str:
        ref = f"[{self.resource}]" if self.resource is not None else ""
        head = " ".join(p for p in (self.kind, ref, self.word) if p)
        text = f"{head}: {self.detail}" if self.detail else head
        if self.bindings:
            text += "  " + ", ".join(f"{n} ↦ {v}" for n, v in self.bindings)
        return text


Trace = tuple[TraceStep, ...]


@dataclass(frozen=True)
class Reading:
    """One derived meaning for the goal, with every derivation that produced
    it (collapsed readings keep all traces; the first is canonical)."""

    meaning: MeaningTerm
    ty: SemType
    traces: tuple[Trace, ...]

    @property
    def trace(self) -> Trace:
        return self.traces[0]

    def __str__(self) -> str:
        return format_term(self.meaning)


# ---------------------------------------------------------------------------
# Pattern unification.


def unify(pattern: MeaningTerm, term: MeaningTerm, subst: dict | None = None):
    """Most general substitution making `pattern` equal `term`, or None.

    Metavariables live in the pattern only; a higher-order metavariable must
    be applied to distinct hypothesis constants (the pattern restriction) and
    is solved by abstracting them out of `term`. Anything outside that
    fragment raises NonPatternError rather than guessing.
    """
    subst = dict(subst) if subst else {}
    closed = normalize(substitute(term, subst))
    if free_vars(closed):
        raise NonPatternError("the closed side of a unification contains metavariables")
    return _unify(pattern, closed, subst)


def _unify(pattern, term, subst):
    pattern = normalize(substitute(pattern, subst))
    if isinstance(pattern, Var):
        return _bind(subst, pattern, term)
    head, args = spine(pattern)
    if isinstance(head, Var) and args:
        if all(isinstance(a, HypConst) for a in args) and len(set(args)) == len(args):
            solution = term
            for arg in reversed(args):
                solution = abstract_over(solution, arg)
            return _bind(subst, head, solution)
        raise NonPatternError(
            f"metavariable {head.name} applied to arguments that are not "
            "distinct hypothesis constants"
        )
    match pattern, term:
        case (App(), App()):
            out = _unify(pattern.fun, term.fun, subst)
            if out is None:
                return None
            return _unify(pattern.arg, term.arg, out)
        case (Lam(), Lam()):
            if pattern.var_type != term.var_type:
                return None
            return _unify(pattern.body, term.body, subst)
        case _:
            return subst if pattern == term else None


def _bind(subst, var: Var, term: MeaningTerm):
    if not _locally_closed(term):
        raise NonPatternError("binding would capture a bound variable")
    if var in free_vars(term):
        return None
    if typecheck(term) != var.ty:
        return None
    replaced = {v: substitute(t, {var: term}) for v, t in subst.items()}
    replaced[var] = term
    return replaced


def _locally_closed(term, depth=0) -> bool:
    match term:
        case BoundVar(index):
            return index < depth
        case App(fun, arg):
            return _locally_closed(fun, depth) and _locally_closed(arg, depth)
        case Lam(_, body):
            return _locally_closed(body, depth + 1)
        case _:
            return True


# ---------------------------------------------------------------------------
# The search engine.


@dataclass(frozen=True)
class _Event:
    kind: str
    ref: int | str | None
    word: str
    atom: GlueFormula | None
    displays: tuple[tuple[str, object], ...] = ()


class _Resource:
    def __init__(self, rid, formula, word):
        self.rid = rid
        self.formula = formula
        self.word = word


class SearchStats:
    """Failure bookkeeping for diagnostics: which atomic goals found no
    supplier, at the deepest premise consumption reached."""

    def __init__(self, premise_ids):
        self.premise_ids = frozenset(premise_ids)
        self.failed_atoms: dict[tuple[str, str], int] = {}

    def note_failure(self, atom: Atom, avail):
        consumed = len(self.premise_ids) - len(self.premise_ids & avail)
        key = (atom.sem.label, str(atom.ty))
        self.failed_atoms[key] = max(consumed, self.failed_atoms.get(key, -1))


class _Search:
    def __init__(self, resources, universe, bound, all_orders=False, stats=None):
        self.registry: dict[int | str, _Resource] = {r.rid: r for r in resources}
        self.universe = universe
        self.bound = bound
        self.all_orders = all_orders
        self.stats = stats
        self.hyp_counter = itertools.count(1)
        self.name_counts: dict[str, int] = {}

    # -- goal dispatch ------------------------------------------------------

    def prove(self, goal: GlueFormula, avail: frozenset, subst, depth, events):
        match goal:
            case Atom():
                yield from self.prove_atom(goal, avail, subst, depth, events)
            case Tensor():
                yield from self.prove_all(flatten_tensor(goal), avail, subst, depth, events)
            case Limp():
                yield from self.prove_limp(goal, avail, subst, depth, events)
            case Forall(var, _) if isinstance(var, MeaningVar):
                yield from self.prove_forall(goal, avail, subst, depth, events)
            case _:
                raise GlueError(f"unsupported goal form: {goal}")

    def prove_all(self, goals, avail, subst, depth, events):
        if self.all_orders and len(goals) > 1:
            orders = itertools.permutations(range(len(goals)))
        else:
            orders = [tuple(range(len(goals)))]
        for order in orders:
            yield from self._seq(goals, order, 0, avail, subst, depth, events)

    def _seq(self, goals, order, i, avail, subst, depth, events):
        if i == len(order):
            yield subst, avail, events
            return
        for s2, a2, e2 in self.prove(goals[order[i]], avail, subst, depth, events):
            yield from self._seq(goals, order, i + 1, a2, s2, depth, e2)

    def prove_limp(self, goal: Limp, avail, subst, depth, events):
        new_ids = []
        for part in flatten_tensor(goal.antecedent):
            part = part.substitute_meanings(subst)
            rid = f"h{next(self.hyp_counter)}"
            word = self._hyp_word(part)
            self.registry[rid] = _Resource(rid, part, word)
            new_ids.append(rid)
            events = events + (_Event("assume", rid, word, part),)
        avail = avail | frozenset(new_ids)
        for s2, a2, e2 in self.prove(goal.consequent, avail, subst, depth, events):
            if any(rid in a2 for rid in new_ids):
                continue  # the hypothesis must be consumed exactly once
            yield s2, a2, e2

    def _hyp_word(self, formula) -> str:
        if isinstance(formula, Atom):
            consts = sorted(hyp_consts(formula.meaning), key=lambda c: c.stamp)
            if consts:
                return consts[-1].name
        return "hyp"

    def prove_forall(self, goal: Forall, avail, subst, depth, events):
        var: MeaningVar = goal.var
        hyp = self._fresh_hyp(var.name, var.ty)
        body = goal.body.substitute_meanings({Var(var.name, var.ty): hyp})
        for s2, a2, e2 in self.prove(body, avail, subst, depth, events):
            if self._leaks(hyp, s2):
                continue
            yield s2, a2, e2 + (_Event("discharge", None, hyp.name, None),)

    def _fresh_hyp(self, base, ty) -> HypConst:
        n = self.name_counts.get(base, 0) + 1
        self.name_counts[base] = n
        name = base if n == 1 else f"{base}{n}"
        return HypConst(name, ty, fresh_stamp())

    def _leaks(self, hyp: HypConst, subst) -> bool:
        # A metavariable older than the hypothesis must not have absorbed it:
        # its solution is visible outside the hypothesis's scope.
        return any(
            var.stamp < hyp.stamp and hyp in hyp_consts(term)
            for var, term in subst.items()
        )

    # -- atomic goals: focus a resource --------------------------------------

    def prove_atom(self, goal: Atom, avail, subst, depth, events):
        if depth > self.bound:
            raise SearchBoundError(
                f"derivation depth exceeded the bound of {self.bound}"
            )
        assert isinstance(goal.sem, SemStructure), "goals must have concrete structures"
        produced = False
        for rid in sorted(avail, key=_rid_order):
            resource = self.registry[rid]
            for antecedents, components, displays in self._focus(resource.formula):
                for k, head in enumerate(components):
                    if not isinstance(head, Atom):
                        continue
                    if head.sem != goal.sem or head.ty != goal.ty:
                        continue
                    rest = components[:k] + components[k + 1 :]
                    for out in self._finish_focus(
                        goal, resource, antecedents, head, rest, displays,
                        avail - {rid}, subst, depth, events,
                    ):
                        produced = True
                        yield out
        if not produced and self.stats is not None:
            self.stats.note_failure(goal, avail)

    def _finish_focus(
        self, goal, resource, antecedents, head, rest, displays,
        avail, subst, depth, events,
    ):
        for s1, a1, e1 in self.prove_all(antecedents, avail, subst, depth + 1, events):
            head_meaning = normalize(substitute(head.meaning, s1))
            if free_vars(head_meaning):
                names = ", ".join(sorted(v.name for v in free_vars(head_meaning)))
                raise NonPatternError(
                    f"head of '{resource.word}' still contains metavariable(s) "
                    f"{names} after its antecedents were proved"
                )
            s2 = _unify(goal.meaning, head_meaning, s1)
            if s2 is None:
                continue
            solved = tuple(
                (v.name, v) for v in (set(s2) - set(s1)) if not v.name.startswith("%")
            )
            a2 = a1
            e2 = e1
            for extra in rest:
                extra = extra.substitute_meanings(s2)
                rid2 = f"d{next(self.hyp_counter)}"
                self.registry[rid2] = _Resource(rid2, extra, resource.word)
                a2 = a2 | {rid2}
                e2 = e2 + (_Event("derive", rid2, resource.word, extra),)
            e2 = e2 + (
                _Event("apply", resource.rid, resource.word, head, displays + solved),
            )
            yield s2, a2, e2

    def _focus(self, formula, displays=()):
        """Strip quantifiers and implications: yield (antecedents, head
        components, display bindings) for every finite-domain choice of
        structure variables."""
        match formula:
            case Forall(var, body):
                if isinstance(var, MeaningVar):
                    fresh = fresh_var(var.name, var.ty)
                    instantiated = body.substitute_meanings(
                        {Var(var.name, var.ty): fresh}
                    )
                    yield from self._focus(
                        instantiated, displays + ((var.name, fresh),)
                    )
                else:
                    for sem in self.universe:
                        yield from self._focus(
                            body.substitute_sem(var.name, sem),
                            displays + ((var.name, sem),),
                        )
            case Limp(antecedent, consequent):
                for antecedents, components, disp in self._focus(consequent, displays):
                    yield flatten_tensor(antecedent) + antecedents, components, disp
            case _:
                yield [], flatten_tensor(formula), displays


def _rid_order(rid):
    return (0, rid, "") if isinstance(rid, int) else (1, 0, rid)


# ---------------------------------------------------------------------------
# Public operations.


def _as_premises(premise_set) -> list[Premise]:
    if isinstance(premise_set, PremiseSet):
        return list(premise_set)
    out = []
    for i, item in enumerate(premise_set, start=1):
        if isinstance(item, Premise):
            out.append(item)
        else:
            out.append(Premise(i, item, f"p{i}", ""))
    return out


def _structure_universe(premise_list, goal_sem=None):
    sems = {
        atom.sem
        for premise in premise_list
        for atom in premise.formula.atoms()
        if isinstance(atom.sem, SemStructure)
    }
    if goal_sem is not None:
        sems.add(goal_sem)
    return sorted(sems, key=lambda s: s.label)


def _default_bound(premise_list) -> int:
    return sum(p.formula.connectives() for p in premise_list) + len(premise_list) + 2


def derive(
    premise_set,
    goal: Goal,
    all_traces: bool = False,
    depth_bound: int | None = None,
    stats: SearchStats | None = None,
    require_all: bool = True,
):
    """All readings of `goal` derivable from the premises, each premise used
    exactly once, deduplicated up to alpha-beta-eta equivalence and sorted by
    their printed form.

    With `require_all=False`, partial derivations are admitted and each
    reading's leftover premise indices are preserved on the side; diagnostics
    uses this to find maximal partial derivations.
    """
    premise_list = _as_premises(premise_set)
    for premise in premise_list:
        if not premise.formula.is_closed():
            raise GlueError(f"premise {premise.tag()} is not closed")
    universe = _structure_universe(premise_list, goal.sem)
    bound = depth_bound if depth_bound is not None else _default_bound(premise_list)
    resources = [_Resource(p.index, p.formula, p.word) for p in premise_list]
    search = _Search(resources, universe, bound, all_orders=all_traces, stats=stats)
    goal_var = fresh_var("%goal", goal.ty)
    goal_atom = Atom(goal.sem, goal.ty, goal_var)
    premise_ids = frozenset(p.index for p in premise_list)

    found: dict[MeaningTerm, dict] = {}
    partials: list[tuple[frozenset, MeaningTerm]] = []
    for subst, avail, events in search.prove(
        goal_atom, premise_ids, {}, 0, ()
    ):
        meaning = normalize(substitute(goal_var, subst))
        if free_vars(meaning) or hyp_consts(meaning):
            continue
        if avail:
            if not require_all:
                partials.append((frozenset(avail) & premise_ids, meaning))
            continue
        key = canonical_form(meaning)
        entry = found.setdefault(key, {"meaning": _tidy_hints(meaning), "traces": []})
        trace = _render_trace(events, subst)
        if trace not in entry["traces"]:
            entry["traces"].append(trace)
    readings = tuple(
        sorted(
            (
                Reading(entry["meaning"], goal.ty, tuple(entry["traces"]))
                for entry in found.values()
            ),
            key=lambda r: format_term(r.meaning),
        )
    )
    if require_all:
        return readings
    return readings, partials


def _tidy_hints(term: MeaningTerm) -> MeaningTerm:
    """Drop the freshness suffix from binder hints; printing re-freshens only
    on actual collisions."""
    match term:
        case App(fun, arg):
            return App(_tidy_hints(fun), _tidy_hints(arg))
        case Lam(ty, body, hint):
            base = hint.rstrip("0123456789") or hint
            return Lam(ty, _tidy_hints(body), base)
        case _:
            return term


def _render_trace(events, subst) -> Trace:
    steps = []
    for ev in events:
        detail = _render_formula(ev.atom, subst) if ev.atom is not None else ""
        bindings = tuple((name, _render_value(value, subst)) for name, value in ev.displays)
        steps.append(TraceStep(ev.kind, ev.ref, ev.word, detail, bindings))
    return tuple(steps)


def _render_formula(formula: GlueFormula, subst) -> str:
    rendered = formula.substitute_meanings(subst)
    if isinstance(rendered, Atom):
        return str(Atom(rendered.sem, rendered.ty, normalize(rendered.meaning)))
    return str(rendered)


def _render_value(value, subst) -> str:
    if isinstance(value, SemStructure):
        return str(value)
    if isinstance(value, MeaningTerm):
        return format_term(normalize(substitute(value, subst)))
    return str(value)


def entails(antecedent: GlueFormula, consequent: GlueFormula) -> bool:
    """Linear entailment with exact resource usage for propositional
    tensor-fragment formulas."""
    premise_list = [
        Premise(i, f, f"p{i}", "")
        for i, f in enumerate(flatten_tensor(antecedent), start=1)
    ]
    universe = _structure_universe(
        premise_list + [Premise(0, consequent, "goal", "")]
    )
    resources = [_Resource(p.index, p.formula, p.word) for p in premise_list]
    search = _Search(resources, universe, _default_bound(premise_list))
    premise_ids = frozenset(p.index for p in premise_list)
    for _subst, avail, _events in search.prove(consequent, premise_ids, {}, 0, ()):
        if not avail:
            return True
    return False


def prop(name: str) -> Atom:
    """A propositional atom for entailment checks."""
    return Atom(SemStructure(name), T, Const(name, T))
