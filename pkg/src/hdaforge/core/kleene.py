"""Rational expressions over starters and terminators, and both Kleene directions.

:func:`compile_expr` builds reduced gST-automata bottom-up (disjoint sum, identity
bridges for concatenation and plus, then re-reduction) and reads off a partial HDA.
:func:`extract` runs state elimination on the ST-automaton of a complex. Every path
between two states has fixed source and target types, so a loop ``R*`` at state ``k``
is written ``I[mu(k)] + R^+``.
"""

from __future__ import annotations

import logging
from collections.abc import Iterable
from dataclasses import dataclass

from hdaforge.core.automaton import (
    PAutomaton,
    State,
    Transition,
    disjoint_sum,
    reduce,
    renumbered,
)
from hdaforge.core.complex import Complex
from hdaforge.core.ipomset import (
    CanonicalForm,
    Conclist,
    DiscreteStep,
    IndexSet,
    Ipomset,
    StepKind,
    canon,
    identity,
)
from hdaforge.core.language import BoundedLanguage, product
from hdaforge.core.translate import phda_of_gsta, st_of
from hdaforge.utils.validators import validate_bound

_LOGGER = logging.getLogger(__name__)

_NO_ATOM = CanonicalForm(length=-1, factors=())


@dataclass(frozen=True, slots=True)
class EmptyExpr:
    pass


@dataclass(frozen=True, slots=True)
class StarterAtom:
    base: Conclist
    active: IndexSet

    def step(self) -> DiscreteStep:
        return DiscreteStep(StepKind.STARTER, tuple(self.base), frozenset(self.active))


@dataclass(frozen=True, slots=True)
class TerminatorAtom:
    base: Conclist
    active: IndexSet

    def step(self) -> DiscreteStep:
        return DiscreteStep(StepKind.TERMINATOR, tuple(self.base), frozenset(self.active))


@dataclass(frozen=True, slots=True)
class IdentityAtom:
    base: Conclist

    def step(self) -> DiscreteStep:
        return DiscreteStep(StepKind.STARTER, tuple(self.base), frozenset())


@dataclass(frozen=True, slots=True)
class UnionExpr:
    items: tuple[RationalExpr, ...]


@dataclass(frozen=True, slots=True)
class ConcatExpr:
    items: tuple[RationalExpr, ...]


@dataclass(frozen=True, slots=True)
class PlusExpr:
    inner: RationalExpr


Atom = StarterAtom | TerminatorAtom | IdentityAtom
RationalExpr = EmptyExpr | StarterAtom | TerminatorAtom | IdentityAtom | UnionExpr | ConcatExpr | PlusExpr


def atom_for(label: Ipomset) -> Atom:
    """The atom denoting a discrete starter, terminator or identity label."""

    view = label.as_iconclist()
    full = frozenset(range(len(view.base)))
    if view.is_identity:
        return IdentityAtom(view.base)
    if view.is_starter:
        return StarterAtom(view.base, full - view.source)
    if view.is_terminator:
        return TerminatorAtom(view.base, full - view.target)
    raise ValueError("only starters, terminators and identities are atoms")


def union_of(items: Iterable[RationalExpr]) -> RationalExpr:
    """Flattened, deduplicated union ordered by canonical first atom; ``0`` is dropped."""

    flat: set[RationalExpr] = set()
    for item in items:
        if isinstance(item, UnionExpr):
            flat.update(item.items)
        elif not isinstance(item, EmptyExpr):
            flat.add(item)
    if not flat:
        return EmptyExpr()
    if len(flat) == 1:
        return next(iter(flat))
    return UnionExpr(tuple(sorted(flat, key=_order_key)))


def concat_of(items: Iterable[RationalExpr]) -> RationalExpr:
    """Flattened concatenation.

    ``0`` absorbs, and so does any pair of neighbours whose interface types differ. An
    identity is dropped only next to a neighbour of its own type.
    """

    flat: list[RationalExpr] = []
    for item in items:
        if isinstance(item, EmptyExpr):
            return EmptyExpr()
        if isinstance(item, ConcatExpr):
            flat.extend(item.items)
        else:
            flat.append(item)
    if not flat:
        return EmptyExpr()
    for left, right in zip(flat, flat[1:], strict=False):
        before, after = _target_type(left), _source_type(right)
        if before is not None and after is not None and before != after:
            return EmptyExpr()

    collapsed: list[RationalExpr] = []
    for item in flat:
        if not (isinstance(item, IdentityAtom) and collapsed and collapsed[-1] == item):
            collapsed.append(item)
    kept = [
        item
        for position, item in enumerate(collapsed)
        if not (isinstance(item, IdentityAtom) and _absorbed(collapsed, position))
    ]
    if not kept:
        return collapsed[0]
    if len(kept) == 1:
        return kept[0]
    return ConcatExpr(tuple(kept))


def plus_of(inner: RationalExpr) -> RationalExpr:
    if isinstance(inner, EmptyExpr | IdentityAtom | PlusExpr):
        return inner
    return PlusExpr(inner)


def eval_expr(expr: RationalExpr, bound: int) -> BoundedLanguage:
    """Language of ``expr`` cut at sparse length ``bound``, computed structurally."""

    validate_bound(bound)
    forms, exact = _evaluate(expr, bound)
    return BoundedLanguage(forms, bound=bound, exact=exact)


def automaton_of(expr: RationalExpr) -> PAutomaton:
    """Reduced gST-automaton recognizing ``expr``."""

    if isinstance(expr, EmptyExpr):
        return PAutomaton()
    if isinstance(expr, IdentityAtom):
        state = State("q0", tuple(expr.base))
        return PAutomaton.build([state], bot=["q0"], top=["q0"])
    if isinstance(expr, StarterAtom | TerminatorAtom):
        label = expr.step().to_ipomset()
        states = [State("q0", label.source_conclist()), State("q1", label.target_conclist())]
        edge = Transition("e0", "q0", "q1", label)
        return reduce(PAutomaton.build(states, [edge], bot=["q0"], top=["q1"]))
    if isinstance(expr, UnionExpr):
        result = automaton_of(expr.items[0])
        for item in expr.items[1:]:
            result = renumbered(disjoint_sum(result, automaton_of(item)))
        return result
    if isinstance(expr, ConcatExpr):
        result = automaton_of(expr.items[0])
        for item in expr.items[1:]:
            result = _concatenate(result, automaton_of(item))
        return result
    if isinstance(expr, PlusExpr):
        return _iterate(automaton_of(expr.inner))
    raise TypeError(f"unknown expression node {type(expr).__name__}")


def compile_expr(expr: RationalExpr) -> Complex:
    """Partial HDA whose language is the language of ``expr``."""

    automaton = automaton_of(expr)
    result = phda_of_gsta(automaton)
    _LOGGER.debug("Compiled expression into %d cells", len(result))
    return result


def extract(complex_: Complex) -> RationalExpr:
    """Rational expression for the language of ``complex_`` by state elimination."""

    automaton = st_of(complex_)
    start, finish = "⊢", "⊣"
    table: dict[tuple[str, str], RationalExpr] = {}

    def add(source: str, target: str, expr: RationalExpr) -> None:
        key = (source, target)
        table[key] = union_of([table.get(key, EmptyExpr()), expr])

    for state_id in sorted(automaton.bot):
        add(start, state_id, IdentityAtom(automaton.states[state_id].mu))
    for state_id in sorted(automaton.top):
        add(state_id, finish, IdentityAtom(automaton.states[state_id].mu))
    for edge in automaton.sorted_edges():
        add(edge.source, edge.target, atom_for(edge.label))

    endpoints = automaton.bot | automaton.top
    order = sorted(set(automaton.states) - endpoints) + sorted(set(automaton.states) & endpoints)
    remaining = {start, finish, *automaton.states}
    for state_id in order:
        remaining.discard(state_id)
        loop = table.pop((state_id, state_id), EmptyExpr())
        if isinstance(loop, EmptyExpr):
            middle: RationalExpr = IdentityAtom(automaton.states[state_id].mu)
        else:
            middle = union_of([IdentityAtom(automaton.states[state_id].mu), plus_of(loop)])
        incoming = [(p, table.pop((p, state_id))) for p in sorted(remaining) if (p, state_id) in table]
        outgoing = [(q, table.pop((state_id, q))) for q in sorted(remaining) if (state_id, q) in table]
        for p, before in incoming:
            for q, after in outgoing:
                add(p, q, concat_of([before, middle, after]))
    result = table.get((start, finish), EmptyExpr())
    _LOGGER.debug("Extracted expression from %d states", len(automaton.states))
    return result


def _absorbed(items: list[RationalExpr], position: int) -> bool:
    base = tuple(items[position].base)
    if position > 0 and _target_type(items[position - 1]) == base:
        return True
    return position + 1 < len(items) and _source_type(items[position + 1]) == base


def _source_type(expr: RationalExpr) -> Conclist | None:
    """Type every word of ``expr`` starts from, or ``None`` when it is not unique."""

    if isinstance(expr, StarterAtom):
        return _without(expr.base, expr.active)
    if isinstance(expr, TerminatorAtom | IdentityAtom):
        return tuple(expr.base)
    if isinstance(expr, ConcatExpr):
        return _source_type(expr.items[0])
    if isinstance(expr, PlusExpr):
        return _source_type(expr.inner)
    if isinstance(expr, UnionExpr):
        found = {_source_type(item) for item in expr.items}
        return found.pop() if len(found) == 1 else None
    return None


def _target_type(expr: RationalExpr) -> Conclist | None:
    if isinstance(expr, TerminatorAtom):
        return _without(expr.base, expr.active)
    if isinstance(expr, StarterAtom | IdentityAtom):
        return tuple(expr.base)
    if isinstance(expr, ConcatExpr):
        return _target_type(expr.items[-1])
    if isinstance(expr, PlusExpr):
        return _target_type(expr.inner)
    if isinstance(expr, UnionExpr):
        found = {_target_type(item) for item in expr.items}
        return found.pop() if len(found) == 1 else None
    return None


def _without(base: Conclist, active: IndexSet) -> Conclist:
    return tuple(label for index, label in enumerate(base) if index not in active)


def _first_atom(expr: RationalExpr) -> Atom | None:
    if isinstance(expr, StarterAtom | TerminatorAtom | IdentityAtom):
        return expr
    if isinstance(expr, UnionExpr | ConcatExpr):
        return _first_atom(expr.items[0])
    if isinstance(expr, PlusExpr):
        return _first_atom(expr.inner)
    return None


def _shape(expr: RationalExpr) -> tuple:
    if isinstance(expr, StarterAtom | TerminatorAtom | IdentityAtom):
        return ("A", expr.step().encoding())
    if isinstance(expr, UnionExpr | ConcatExpr):
        tag = "U" if isinstance(expr, UnionExpr) else "C"
        return (tag, tuple(_shape(item) for item in expr.items))
    if isinstance(expr, PlusExpr):
        return ("P", _shape(expr.inner))
    return ("0",)


def _order_key(expr: RationalExpr) -> tuple[CanonicalForm, tuple]:
    atom = _first_atom(expr)
    first = canon(atom.step().to_ipomset()) if atom is not None else _NO_ATOM
    return (first, _shape(expr))


def _concatenate(left: PAutomaton, right: PAutomaton) -> PAutomaton:
    glued = disjoint_sum(left, right)
    edges = dict(glued.edges)
    for p in sorted(left.top):
        for q in sorted(right.bot):
            if left.states[p].mu == right.states[q].mu:
                edge_id = f"b:{p}>{q}"
                edges[edge_id] = Transition(edge_id, f"l.{p}", f"r.{q}", identity(left.states[p].mu))
    bridged = PAutomaton(
        states=dict(glued.states),
        edges=edges,
        bot=frozenset(f"l.{p}" for p in left.bot),
        top=frozenset(f"r.{q}" for q in right.top),
    )
    return renumbered(reduce(bridged))


def _iterate(automaton: PAutomaton) -> PAutomaton:
    edges = dict(automaton.edges)
    for p in sorted(automaton.top):
        for q in sorted(automaton.bot):
            if automaton.states[p].mu == automaton.states[q].mu:
                edge_id = f"b:{p}>{q}"
                edges[edge_id] = Transition(edge_id, p, q, identity(automaton.states[p].mu))
    if len(edges) == len(automaton.edges):
        return automaton
    looped = PAutomaton(
        states=dict(automaton.states), edges=edges, bot=automaton.bot, top=automaton.top
    )
    return renumbered(reduce(looped))


def _evaluate(expr: RationalExpr, bound: int) -> tuple[frozenset[CanonicalForm], bool]:
    if isinstance(expr, EmptyExpr):
        return frozenset(), True
    if isinstance(expr, StarterAtom | TerminatorAtom | IdentityAtom):
        form = canon(expr.step().to_ipomset())
        if form.length > bound:
            return frozenset(), False
        return frozenset({form}), True
    if isinstance(expr, UnionExpr):
        forms: set[CanonicalForm] = set()
        exact = True
        for item in expr.items:
            item_forms, item_exact = _evaluate(item, bound)
            forms |= item_forms
            exact = exact and item_exact
        return frozenset(forms), exact
    if isinstance(expr, ConcatExpr):
        current, exact = _evaluate(expr.items[0], bound)
        for item in expr.items[1:]:
            item_forms, item_exact = _evaluate(item, bound)
            current, cut = _bounded_product(current, item_forms, bound)
            exact = exact and item_exact and not cut
        return current, exact
    if isinstance(expr, PlusExpr):
        base, exact = _evaluate(expr.inner, bound)
        result = set(base)
        frontier = set(base)
        while frontier:
            grown, cut = _bounded_product(frontier, base, bound)
            exact = exact and not cut
            frontier = set(grown) - result
            result |= frontier
        return frozenset(result), exact
    raise TypeError(f"unknown expression node {type(expr).__name__}")


def _bounded_product(
    left: Iterable[CanonicalForm],
    right: Iterable[CanonicalForm],
    bound: int,
) -> tuple[frozenset[CanonicalForm], bool]:
    everything = product(left, right)
    kept = frozenset(form for form in everything if form.length <= bound)
    return kept, len(kept) < len(everything)


__all__ = [
    "Atom",
    "ConcatExpr",
    "EmptyExpr",
    "IdentityAtom",
    "PlusExpr",
    "RationalExpr",
    "StarterAtom",
    "TerminatorAtom",
    "UnionExpr",
    "atom_for",
    "automaton_of",
    "compile_expr",
    "concat_of",
    "eval_expr",
    "extract",
    "plus_of",
    "union_of",
]
