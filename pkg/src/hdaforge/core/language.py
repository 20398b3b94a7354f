"""Paths, recognized ipomsets and bounded languages of complexes and P-automata.

A bounded language at bound ``k`` holds every accepted ipomset whose sparse step
decomposition has at most ``k`` proper factors. Sparse length never shrinks under gluing,
so the enumeration prunes any partial run that has already gone past ``k``.
"""

from __future__ import annotations

import itertools
import logging
from collections import deque
from collections.abc import Iterable, Iterator
from dataclasses import dataclass
from enum import StrEnum

from hdaforge.core.automaton import PAutomaton
from hdaforge.core.complex import Complex, lift_indices
from hdaforge.core.exceptions import InterfaceMismatch, MergeUndefined, UnknownCell
from hdaforge.core.ipomset import (
    CanonicalForm,
    IndexSet,
    Ipomset,
    canon,
    glue,
    identity,
    sparse_length,
    starter,
    terminator,
)
from hdaforge.utils.validators import validate_bound

_LOGGER = logging.getLogger(__name__)

Recognizer = Complex | PAutomaton


class Direction(StrEnum):
    UP = "up"
    DOWN = "down"


@dataclass(frozen=True, slots=True)
class PathStep:
    """An upstep ``x -A-> y`` or a downstep ``y -B-> z``; indices refer to the higher cell."""

    direction: Direction
    indices: IndexSet


@dataclass(frozen=True, slots=True)
class Path:
    """Alternating cells and steps in a complex: ``cells[i] -steps[i]-> cells[i+1]``."""

    cells: tuple[str, ...]
    steps: tuple[PathStep, ...] = ()

    def __post_init__(self) -> None:
        if len(self.cells) != len(self.steps) + 1:
            raise ValueError("a path needs exactly one more cell than steps")

    def __len__(self) -> int:
        return len(self.steps)

    @property
    def source(self) -> str:
        return self.cells[0]

    @property
    def target(self) -> str:
        return self.cells[-1]

    @property
    def is_sparse(self) -> bool:
        return all(a.direction is not b.direction for a, b in itertools.pairwise(self.steps))


@dataclass(frozen=True, slots=True)
class AutomatonPath:
    states: tuple[str, ...]
    edges: tuple[str, ...] = ()

    def __len__(self) -> int:
        return len(self.edges)

    @property
    def source(self) -> str:
        return self.states[0]

    @property
    def target(self) -> str:
        return self.states[-1]


@dataclass(frozen=True, slots=True)
class BoundedLanguage:
    """Canonical forms of accepted ipomsets up to ``bound`` proper factors.

    ``exact`` is set when nothing was cut off, so the whole language is listed.
    """

    forms: frozenset[CanonicalForm]
    bound: int
    exact: bool = False

    def __contains__(self, item: object) -> bool:
        if isinstance(item, Ipomset):
            item = canon(item)
        return item in self.forms

    def __iter__(self) -> Iterator[CanonicalForm]:
        return iter(sorted(self.forms))

    def __len__(self) -> int:
        return len(self.forms)

    def restricted(self, bound: int) -> BoundedLanguage:
        kept = frozenset(form for form in self.forms if form.length <= bound)
        return BoundedLanguage(kept, bound=min(bound, self.bound), exact=self.exact)


@dataclass(frozen=True, slots=True)
class EquivalenceResult:
    equal: bool
    bound: int
    witness: CanonicalForm | None = None
    only_in: str | None = None

    def __bool__(self) -> bool:
        return self.equal


def step_label(complex_: Complex, higher: str, step: PathStep) -> Ipomset:
    """Starter or terminator read along one step whose higher cell is ``higher``."""

    base = complex_.ev(higher)
    if step.direction is Direction.UP:
        return starter(base, step.indices)
    return terminator(base, step.indices)


def check_path(complex_: Complex, path: Path) -> None:
    for cell_id in path.cells:
        complex_.cell(cell_id)
    for (before, after), step in zip(itertools.pairwise(path.cells), path.steps, strict=True):
        if step.direction is Direction.UP:
            valid = before in complex_.face(after, step.indices, ())
        else:
            valid = after in complex_.face(before, (), step.indices)
        if not valid:
            raise InterfaceMismatch(f"no {step.direction.value}step from {before!r} to {after!r}")


def ev_path(recognizer: Recognizer, path: Path | AutomatonPath) -> Ipomset:
    """Glue the labels along ``path``; a constant path yields an identity."""

    if isinstance(recognizer, PAutomaton):
        if not isinstance(path, AutomatonPath):
            raise TypeError("automaton paths list states and transitions")
        result = identity(recognizer.state(path.source).mu)
        for position, edge_id in enumerate(path.edges):
            result = _glue_at(result, recognizer.edge(edge_id).label, position)
        return result

    if not isinstance(path, Path):
        raise TypeError("complex paths list cells and steps")
    result = identity(recognizer.ev(path.source))
    for position, ((before, after), step) in enumerate(
        zip(itertools.pairwise(path.cells), path.steps, strict=True)
    ):
        higher = after if step.direction is Direction.UP else before
        result = _glue_at(result, step_label(recognizer, higher, step), position)
    return result


def sparsify(complex_: Complex, path: Path) -> Path:
    """Merge consecutive steps of the same direction through composite faces."""

    check_path(complex_, path)
    cells = [path.cells[0]]
    steps: list[PathStep] = []
    for step, cell_id in zip(path.steps, path.cells[1:], strict=True):
        if steps and steps[-1].direction is step.direction:
            previous = steps[-1]
            if step.direction is Direction.UP:
                size = len(complex_.ev(cell_id))
                merged = step.indices | lift_indices(size, step.indices, previous.indices)
                valid = cells[-2] in complex_.face(cell_id, merged, ())
            else:
                size = len(complex_.ev(cells[-2]))
                merged = previous.indices | lift_indices(size, previous.indices, step.indices)
                valid = cell_id in complex_.face(cells[-2], (), merged)
            if not valid:
                raise MergeUndefined(
                    f"{step.direction.value}steps through {cells[-1]!r} have no composite face"
                )
            steps[-1] = PathStep(step.direction, merged)
            cells[-1] = cell_id
        else:
            steps.append(step)
            cells.append(cell_id)
    return Path(tuple(cells), tuple(steps))


def iter_accepting_paths(recognizer: Recognizer, max_steps: int) -> Iterator[Path | AutomatonPath]:
    """Every accepting path with at most ``max_steps`` steps, in a deterministic order."""

    validate_bound(max_steps)
    if isinstance(recognizer, PAutomaton):
        for start in sorted(recognizer.bot):
            yield from _automaton_paths(recognizer, AutomatonPath((start,)), max_steps)
        return
    moves = _complex_moves(recognizer)
    for start in sorted(recognizer.bot):
        yield from _complex_paths(recognizer, moves, Path((start,)), max_steps)


def enumerate_language(recognizer: Recognizer, bound: int) -> BoundedLanguage:
    """Accepted ipomsets with sparse length at most ``bound``."""

    validate_bound(bound)
    if isinstance(recognizer, PAutomaton):
        moves = {
            state_id: [(edge.target, edge.label) for edge in recognizer.outgoing(state_id)]
            for state_id in recognizer.states
        }
        starts = {state_id: recognizer.states[state_id].mu for state_id in recognizer.bot}
        accepting = recognizer.top
    else:
        moves = {cell_id: [] for cell_id in recognizer.cells}
        for lower, higher, indices in recognizer.upsteps():
            moves[lower].append((higher, starter(recognizer.ev(higher), indices)))
        for higher, lower, indices in recognizer.downsteps():
            moves[higher].append((lower, terminator(recognizer.ev(higher), indices)))
        starts = {cell_id: recognizer.ev(cell_id) for cell_id in recognizer.bot}
        accepting = recognizer.top

    seen: set[tuple[str, CanonicalForm]] = set()
    queue: deque[tuple[str, Ipomset]] = deque()
    for node in sorted(starts):
        start = identity(starts[node])
        seen.add((node, canon(start)))
        queue.append((node, start))

    forms: set[CanonicalForm] = set()
    exact = True
    while queue:
        node, word = queue.popleft()
        if node in accepting:
            forms.add(canon(word))
        for target, label in moves[node]:
            extended = glue(word, label)
            form = canon(extended)
            if form.length > bound:
                exact = False
                continue
            if (target, form) not in seen:
                seen.add((target, form))
                queue.append((target, extended))
    _LOGGER.debug("Enumerated %d ipomsets at bound %d (exact=%s)", len(forms), bound, exact)
    return BoundedLanguage(frozenset(forms), bound=bound, exact=exact)


def is_member(recognizer: Recognizer, ipomset: Ipomset) -> bool:
    """Exact membership: the language at the query's own sparse length decides it."""

    return ipomset in enumerate_language(recognizer, sparse_length(ipomset))


def lang_equiv(
    left: Recognizer | BoundedLanguage,
    right: Recognizer | BoundedLanguage,
    bound: int,
) -> EquivalenceResult:
    """Compare bounded languages; on failure report the smallest separating ipomset."""

    validate_bound(bound)
    first = _language_of(left, bound)
    second = _language_of(right, bound)
    difference = first.forms ^ second.forms
    if not difference:
        return EquivalenceResult(True, bound)
    witness = min(difference)
    side = "left" if witness in first.forms else "right"
    return EquivalenceResult(False, bound, witness=witness, only_in=side)


def union(left: Iterable[CanonicalForm], right: Iterable[CanonicalForm]) -> frozenset[CanonicalForm]:
    return frozenset(left) | frozenset(right)


def product(
    left: Iterable[CanonicalForm],
    right: Iterable[CanonicalForm],
    bound: int | None = None,
) -> frozenset[CanonicalForm]:
    """All composable gluings ``P * Q``; pairs with mismatched interfaces are skipped."""

    result: set[CanonicalForm] = set()
    seconds = [(form, form.to_ipomset()) for form in sorted(frozenset(right))]
    for first in sorted(frozenset(left)):
        first_ipomset = first.to_ipomset()
        for _, second_ipomset in seconds:
            try:
                glued = canon(glue(first_ipomset, second_ipomset))
            except InterfaceMismatch:
                continue
            if bound is None or glued.length <= bound:
                result.add(glued)
    return frozenset(result)


def plus(
    language: Iterable[CanonicalForm],
    *,
    iterations: int | None = None,
    bound: int | None = None,
) -> frozenset[CanonicalForm]:
    """Union of the first ``iterations`` powers, or of all powers within ``bound``."""

    if iterations is None and bound is None:
        raise ValueError("plus needs an iteration count or a bound")
    base = frozenset(form for form in language if bound is None or form.length <= bound)
    result = set(base)
    frontier = set(base)
    rounds = 1
    while frontier and (iterations is None or rounds < iterations):
        frontier = set(product(frontier, base, bound)) - result
        result |= frontier
        rounds += 1
    return frozenset(result)


def _language_of(item: Recognizer | BoundedLanguage, bound: int) -> BoundedLanguage:
    if isinstance(item, BoundedLanguage):
        return item.restricted(bound)
    return enumerate_language(item, bound)


def _glue_at(left: Ipomset, right: Ipomset, position: int) -> Ipomset:
    try:
        return glue(left, right)
    except InterfaceMismatch as exc:
        raise InterfaceMismatch(exc.detail, position=position) from exc


def _complex_moves(complex_: Complex) -> dict[str, list[tuple[str, PathStep]]]:
    moves: dict[str, list[tuple[str, PathStep]]] = {cell_id: [] for cell_id in complex_.cells}
    for lower, higher, indices in complex_.upsteps():
        moves[lower].append((higher, PathStep(Direction.UP, indices)))
    for higher, lower, indices in complex_.downsteps():
        moves[higher].append((lower, PathStep(Direction.DOWN, indices)))
    return moves


def _complex_paths(
    complex_: Complex,
    moves: dict[str, list[tuple[str, PathStep]]],
    path: Path,
    budget: int,
) -> Iterator[Path]:
    if path.target in complex_.top:
        yield path
    if budget == 0:
        return
    for target, step in moves[path.target]:
        yield from _complex_paths(
            complex_, moves, Path(path.cells + (target,), path.steps + (step,)), budget - 1
        )


def _automaton_paths(automaton: PAutomaton, path: AutomatonPath, budget: int) -> Iterator[AutomatonPath]:
    if path.target not in automaton.states:
        raise UnknownCell(f"unknown state {path.target!r}")
    if path.target in automaton.top:
        yield path
    if budget == 0:
        return
    for edge in automaton.outgoing(path.target):
        yield from _automaton_paths(
            automaton, AutomatonPath(path.states + (edge.target,), path.edges + (edge.id,)), budget - 1
        )


__all__ = [
    "AutomatonPath",
    "BoundedLanguage",
    "Direction",
    "EquivalenceResult",
    "Path",
    "PathStep",
    "Recognizer",
    "check_path",
    "enumerate_language",
    "ev_path",
    "is_member",
    "iter_accepting_paths",
    "lang_equiv",
    "plus",
    "product",
    "sparsify",
    "step_label",
    "union",
]
