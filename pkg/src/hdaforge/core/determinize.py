"""Determinism checks and the subset-style determinization of partial HDAs.

A macro-state ``(K, A, U)`` stands for the class of every ipomset ``P`` ending in a
terminator (or an identity) with ``K = X(⊥, P)``, followed by the starter that starts
``A`` into ``U``. Classes are compared by their reachable sets only.
"""

from __future__ import annotations

import logging
from collections import defaultdict, deque
from collections.abc import Iterable, Iterator
from dataclasses import dataclass

from hdaforge.core.complex import (
    Cell,
    Complex,
    format_index_set,
    lift_indices,
    push_indices,
    remaining_positions,
    validate,
)
from hdaforge.core.exceptions import PreconditionViolated
from hdaforge.core.ipomset import Conclist, IndexSet, Ipomset, StepKind, sparse_decompose
from hdaforge.core.variants import Variant

_LOGGER = logging.getLogger(__name__)

_EMPTY: IndexSet = frozenset()


@dataclass(frozen=True, slots=True)
class MacroState:
    cells: frozenset[str]
    pending: IndexSet
    ev: Conclist

    @property
    def base(self) -> Conclist:
        """Type of the cells in ``cells``: ``ev`` without the pending events."""

        return tuple(self.ev[index] for index in remaining_positions(len(self.ev), self.pending))


@dataclass(frozen=True, slots=True)
class DeterminismViolation:
    rule: str
    cells: tuple[str, ...]
    detail: str


@dataclass(frozen=True, slots=True)
class DeterminismReport:
    violations: tuple[DeterminismViolation, ...] = ()

    @property
    def deterministic(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:
        return self.deterministic


@dataclass(frozen=True, slots=True)
class Determinization:
    """The deterministic complex together with the macro-state behind every cell."""

    complex: Complex
    states: dict[str, MacroState]


def ends_in_terminator(ipomset: Ipomset) -> bool:
    """Whether the ipomset is an identity or its last sparse factor is a terminator."""

    steps = sparse_decompose(ipomset).steps
    return not steps or steps[-1].is_identity or steps[-1].kind is StepKind.TERMINATOR


def is_deterministic(complex_: Complex) -> DeterminismReport:
    """At most one initial cell per type and at most one co-face per lower face."""

    violations: list[DeterminismViolation] = []
    initial: dict[Conclist, list[str]] = defaultdict(list)
    for cell_id in sorted(complex_.bot):
        initial[complex_.ev(cell_id)].append(cell_id)
    for ev, cells in sorted(initial.items()):
        if len(cells) > 1:
            violations.append(
                DeterminismViolation(
                    "initial", tuple(cells), f"{len(cells)} initial cells of type {list(ev)}"
                )
            )

    cofaces: dict[tuple[str, IndexSet, Conclist], list[str]] = defaultdict(list)
    for lower, cell_id, pending in complex_.upsteps():
        cofaces[(lower, pending, complex_.ev(cell_id))].append(cell_id)
    for (lower, pending, ev), cells in sorted(cofaces.items(), key=_coface_order):
        if len(cells) > 1:
            violations.append(
                DeterminismViolation(
                    "coface",
                    (lower, *cells),
                    f"{lower!r} is the {{{format_index_set(pending)}}}-lower face of "
                    f"{len(cells)} cells of type {list(ev)}: {cells}",
                )
            )
    _LOGGER.debug("Determinism check found %d violations", len(violations))
    return DeterminismReport(tuple(violations))


def stripped_id(cell_id: str, pending: Iterable[int]) -> str:
    return f"({cell_id}|{format_index_set(pending)})"


def strip_initial_lower_faces(complex_: Complex) -> Complex:
    """Copy every cell reachable from an initial cell by an upstep so initial cells have no lower faces.

    The copy ``(x|C)`` remembers the events ``C`` started since the initial cell; its lower
    faces only unstart events of ``C`` and its other faces are those of ``x``.
    """

    copies: dict[tuple[str, IndexSet], str] = {}
    for cell_id in sorted(complex_.cells):
        size = complex_.cells[cell_id].dimension
        for pending in _subsets(range(size)):
            if complex_.face(cell_id, pending, _EMPTY) & complex_.bot:
                copies[(cell_id, pending)] = stripped_id(cell_id, pending)

    cells = list(complex_.cells.values())
    faces: list[tuple[str, IndexSet, IndexSet, list[str]]] = [
        (cell_id, lower, upper, sorted(targets))
        for cell_id, lower, upper, targets in complex_.face_entries()
    ]
    for (cell_id, pending), name in sorted(copies.items(), key=lambda item: item[1]):
        cells.append(Cell(name, complex_.ev(cell_id)))
        size = complex_.cells[cell_id].dimension
        for lower in _subsets(pending):
            if not lower:
                continue
            rest = push_indices(size, lower, pending - lower)
            targets = [
                copies[(target, rest)]
                for target in sorted(complex_.face(cell_id, lower, _EMPTY))
                if (target, rest) in copies
            ]
            faces.append((name, lower, _EMPTY, targets))
        for (lower, upper), targets in complex_.faces.get(cell_id, {}).items():
            if upper:
                faces.append((name, lower, upper, sorted(targets)))

    accepting = set(complex_.top)
    accepting.update(name for (cell_id, _), name in copies.items() if cell_id in complex_.top)
    result = Complex.build(
        Variant.PHDA,
        cells,
        faces,
        bot=[copies[(cell_id, _EMPTY)] for cell_id in complex_.bot],
        top=accepting,
    )
    _LOGGER.debug("Stripping added %d start copies", len(copies))
    return result


def reach_step(
    complex_: Complex,
    cells: Iterable[str],
    pending: Iterable[int],
    terminated: Iterable[int],
    *,
    ev: Conclist | None = None,
) -> frozenset[str]:
    """Cells reached from ``cells`` by starting ``pending`` and then terminating ``terminated``.

    ``ev`` restricts the intermediate cells to one type.
    """

    start = frozenset(cells)
    lower = frozenset(pending)
    upper = frozenset(terminated)
    reached: set[str] = set()
    for middle in _cofaces(complex_, start, lower, ev):
        reached |= complex_.face(middle, _EMPTY, upper)
    return frozenset(reached)


def determinize(complex_: Complex) -> Determinization:
    """Build the deterministic pHDA of macro-states together with the state table."""

    report = validate(complex_, Variant.PHDA)
    if not report.valid:
        first = report.violations[0]
        raise PreconditionViolated(
            f"determinization needs a valid pHDA: {first.rule} at {first.cell!r}: {first.detail}"
        )
    source = strip_initial_lower_faces(complex_)
    names: dict[MacroState, str] = {}
    queue: deque[MacroState] = deque()

    def visit(state: MacroState) -> str:
        if state not in names:
            names[state] = f"m{len(names)}"
            queue.append(state)
        return names[state]

    initial_by_type: dict[Conclist, set[str]] = defaultdict(set)
    for cell_id in source.bot:
        initial_by_type[source.ev(cell_id)].add(cell_id)
    identity_states = {
        MacroState(frozenset(found), _EMPTY, ev) for ev, found in initial_by_type.items()
    }
    bot = [visit(state) for state in sorted(identity_states, key=_state_order)]

    faces: list[tuple[str, IndexSet, IndexSet, list[str]]] = []
    top: list[str] = []
    while queue:
        state = queue.popleft()
        name = names[state]
        if _accepts(source, state):
            top.append(name)
        if not state.pending:
            for ev, pending in _upsteps(source, state.cells):
                upper_name = visit(MacroState(state.cells, pending, ev))
                faces.append((upper_name, pending, _EMPTY, [name]))
            if state in identity_states:
                for terminated in _subsets(range(len(state.ev))):
                    if not terminated:
                        continue
                    reached = reach_step(source, state.cells, _EMPTY, terminated)
                    if reached:
                        lower_name = visit(_after(reached, state.ev, terminated))
                        faces.append((name, _EMPTY, terminated, [lower_name]))
            continue
        size = len(state.ev)
        for terminated in _subsets(range(size)):
            if not terminated:
                continue
            reached = reach_step(source, state.cells, state.pending, terminated, ev=state.ev)
            if reached:
                faces.append(
                    (name, _EMPTY, terminated, [visit(_after(reached, state.ev, terminated))])
                )
        # composite faces: undo the pending starter, then terminate
        base = MacroState(state.cells, _EMPTY, state.base)
        if base in identity_states:
            for terminated in _subsets(range(len(base.ev))):
                if not terminated:
                    continue
                reached = reach_step(source, base.cells, _EMPTY, terminated)
                if reached:
                    composite = lift_indices(size, state.pending, terminated)
                    target = visit(_after(reached, base.ev, terminated))
                    faces.append((name, state.pending, composite, [target]))

    cells = [Cell(name, state.ev) for state, name in names.items()]
    result = Complex.build(Variant.PHDA, cells, faces, bot=bot, top=top)
    _LOGGER.debug("Determinized %d cells into %d macro-states", len(complex_), len(result))
    return Determinization(result, {name: state for state, name in names.items()})


def det(complex_: Complex) -> Complex:
    return determinize(complex_).complex


def _after(reached: frozenset[str], ev: Conclist, terminated: IndexSet) -> MacroState:
    rest = tuple(ev[index] for index in remaining_positions(len(ev), terminated))
    return MacroState(reached, _EMPTY, rest)


def _accepts(complex_: Complex, state: MacroState) -> bool:
    if not state.pending:
        return bool(state.cells & complex_.top)
    return any(
        cell_id in complex_.top
        for cell_id in _cofaces(complex_, state.cells, state.pending, state.ev)
    )


def _upsteps(complex_: Complex, cells: frozenset[str]) -> list[tuple[Conclist, IndexSet]]:
    found: set[tuple[Conclist, IndexSet]] = set()
    for lower, cell_id, pending in complex_.upsteps():
        if lower in cells:
            found.add((complex_.ev(cell_id), pending))
    return sorted(found, key=lambda item: (item[0], sorted(item[1])))


def _cofaces(
    complex_: Complex,
    cells: frozenset[str],
    pending: IndexSet,
    ev: Conclist | None,
) -> Iterator[str]:
    if not pending:
        yield from sorted(cell_id for cell_id in cells if ev is None or complex_.ev(cell_id) == ev)
        return
    for lower, cell_id, upstep in complex_.upsteps():
        if upstep == pending and lower in cells and (ev is None or complex_.ev(cell_id) == ev):
            yield cell_id


def _subsets(items: Iterable[int]) -> Iterator[IndexSet]:
    pool = sorted(items)
    for mask in range(1 << len(pool)):
        yield frozenset(item for bit, item in enumerate(pool) if mask >> bit & 1)


def _state_order(state: MacroState) -> tuple[Conclist, tuple[str, ...]]:
    return state.ev, tuple(sorted(state.cells))


def _coface_order(item: tuple[tuple[str, IndexSet, Conclist], list[str]]) -> tuple:
    (lower, pending, ev), _ = item
    return lower, sorted(pending), ev


__all__ = [
    "DeterminismReport",
    "DeterminismViolation",
    "Determinization",
    "MacroState",
    "det",
    "determinize",
    "ends_in_terminator",
    "is_deterministic",
    "reach_step",
    "strip_initial_lower_faces",
    "stripped_id",
]
