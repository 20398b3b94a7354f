"""Finite variant-tagged precubical complexes and their validators.

Face tables are sparse: an absent ``(A, B)`` key on a cell means the face is undefined.
Event indices are positional and 0-based; a face over ``A ∪ B`` removed re-packs the
remaining positions in order.
"""

from __future__ import annotations

import dataclasses
import itertools
import logging
from collections.abc import Iterable, Iterator, Mapping, Sequence
from dataclasses import dataclass, field

import networkx as nx

from hdaforge.core.exceptions import IndexOutOfRange, InvalidComplex, UnknownCell
from hdaforge.core.ipomset import Conclist, IndexSet
from hdaforge.core.variants import (
    Composition,
    InterfaceDiscipline,
    Variant,
    VariantRules,
    get_rules,
)

_LOGGER = logging.getLogger(__name__)

FaceKey = tuple[IndexSet, IndexSet]
FaceEntry = tuple[str, IndexSet, IndexSet, frozenset[str]]

_EMPTY: IndexSet = frozenset()


@dataclass(frozen=True, slots=True)
class Cell:
    """A cell with its event conclist and, for interface variants, its ``(S, T)``."""

    id: str
    ev: Conclist
    source: IndexSet | None = None
    target: IndexSet | None = None

    def __post_init__(self) -> None:
        if (self.source is None) != (self.target is None):
            raise InvalidComplex(f"cell {self.id!r} must carry both interfaces or neither")
        for index in (self.source or _EMPTY) | (self.target or _EMPTY):
            if not 0 <= index < len(self.ev):
                raise IndexOutOfRange(f"interface index {index} outside cell {self.id!r}")

    @property
    def dimension(self) -> int:
        return len(self.ev)

    @property
    def has_interface(self) -> bool:
        return self.source is not None


@dataclass(frozen=True, slots=True)
class Complex:
    """Cells, a relational face table and initial/accepting cells under a variant tag."""

    variant: Variant
    cells: Mapping[str, Cell] = field(default_factory=dict)
    faces: Mapping[str, Mapping[FaceKey, frozenset[str]]] = field(default_factory=dict)
    bot: frozenset[str] = frozenset()
    top: frozenset[str] = frozenset()

    def __post_init__(self) -> None:
        _check_assembly(self)

    @classmethod
    def build(
        cls,
        variant: Variant | str,
        cells: Iterable[Cell],
        faces: Iterable[tuple[str, Iterable[int], Iterable[int], Iterable[str]]] = (),
        bot: Iterable[str] = (),
        top: Iterable[str] = (),
    ) -> Complex:
        """Assemble a complex from loose data, merging repeated keys and dropping empty ones."""

        table: dict[str, dict[FaceKey, frozenset[str]]] = {}
        by_id: dict[str, Cell] = {}
        for cell in cells:
            if cell.id in by_id:
                raise InvalidComplex(f"duplicate cell id {cell.id!r}")
            by_id[cell.id] = cell
        for cell_id, lower, upper, targets in faces:
            key = (frozenset(lower), frozenset(upper))
            chosen = frozenset(targets)
            if not chosen or key == (_EMPTY, _EMPTY):
                continue
            entries = table.setdefault(cell_id, {})
            entries[key] = entries.get(key, frozenset()) | chosen
        return cls(
            variant=Variant(variant),
            cells=by_id,
            faces=table,
            bot=frozenset(bot),
            top=frozenset(top),
        )

    def __len__(self) -> int:
        return len(self.cells)

    def cell(self, cell_id: str) -> Cell:
        try:
            return self.cells[cell_id]
        except KeyError as exc:
            raise UnknownCell(f"unknown cell {cell_id!r}") from exc

    def ev(self, cell_id: str) -> Conclist:
        return self.cell(cell_id).ev

    def face(self, cell_id: str, lower: Iterable[int], upper: Iterable[int]) -> frozenset[str]:
        cell = self.cell(cell_id)
        key = (frozenset(lower), frozenset(upper))
        _check_face_key(cell, key)
        if key == (_EMPTY, _EMPTY):
            return frozenset({cell_id})
        return self.faces.get(cell_id, {}).get(key, frozenset())

    def face_entries(self) -> Iterator[FaceEntry]:
        """Every stored entry, ordered by cell id and then by index sets."""

        for cell_id in sorted(self.faces):
            entries = self.faces[cell_id]
            for key in sorted(entries, key=_key_order):
                yield cell_id, key[0], key[1], entries[key]

    def cells_of_type(self, ev: Sequence[str]) -> frozenset[str]:
        wanted = tuple(ev)
        return frozenset(cell_id for cell_id, cell in self.cells.items() if cell.ev == wanted)

    def upsteps(self) -> Iterator[tuple[str, str, IndexSet]]:
        """Triples ``(lower, cell, A)`` with ``lower`` in the ``A``-lower face of ``cell``."""

        for cell_id, lower, upper, targets in self.face_entries():
            if lower and not upper:
                for target in sorted(targets):
                    yield target, cell_id, lower

    def downsteps(self) -> Iterator[tuple[str, str, IndexSet]]:
        """Triples ``(cell, upper, B)`` with ``upper`` in the ``B``-upper face of ``cell``."""

        for cell_id, lower, upper, targets in self.face_entries():
            if upper and not lower:
                for target in sorted(targets):
                    yield cell_id, target, upper

    def interfaces(self, cell_id: str) -> tuple[IndexSet, IndexSet]:
        """Stored interfaces, or those implied by which singleton faces are missing."""

        cell = self.cell(cell_id)
        if cell.source is not None and cell.target is not None:
            return cell.source, cell.target
        entries = self.faces.get(cell_id, {})
        events = range(cell.dimension)
        source = frozenset(e for e in events if (frozenset({e}), _EMPTY) not in entries)
        target = frozenset(e for e in events if (_EMPTY, frozenset({e})) not in entries)
        return source, target

    def with_variant(self, variant: Variant) -> Complex:
        return dataclasses.replace(self, variant=variant)

    def restricted(self, keep: Iterable[str]) -> Complex:
        """Sub-complex on ``keep``; entries pointing outside are cut down to what remains."""

        kept = frozenset(keep)
        faces: dict[str, dict[FaceKey, frozenset[str]]] = {}
        for cell_id, lower, upper, targets in self.face_entries():
            if cell_id not in kept:
                continue
            remaining = targets & kept
            if remaining:
                faces.setdefault(cell_id, {})[(lower, upper)] = remaining
        return Complex(
            variant=self.variant,
            cells={cell_id: cell for cell_id, cell in self.cells.items() if cell_id in kept},
            faces=faces,
            bot=self.bot & kept,
            top=self.top & kept,
        )


@dataclass(frozen=True, slots=True)
class Violation:
    rule: str
    cell: str
    detail: str


@dataclass(frozen=True, slots=True)
class ValidationReport:
    """Outcome of checking a complex against one variant's defining conditions."""

    variant: Variant
    violations: tuple[Violation, ...] = ()

    @property
    def valid(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:
        return self.valid


def remaining_positions(size: int, removed: Iterable[int]) -> tuple[int, ...]:
    gone = set(removed)
    return tuple(index for index in range(size) if index not in gone)


def lift_indices(size: int, removed: Iterable[int], indices: Iterable[int]) -> IndexSet:
    """Map positions of a face conclist back to positions of the parent conclist."""

    kept = remaining_positions(size, removed)
    return frozenset(kept[index] for index in indices)


def push_indices(size: int, removed: Iterable[int], indices: Iterable[int]) -> IndexSet:
    """Map parent positions that survive the removal to positions of the face conclist."""

    position = {parent: index for index, parent in enumerate(remaining_positions(size, removed))}
    return frozenset(position[index] for index in indices)


def format_index_set(indices: Iterable[int]) -> str:
    """Render 0-based positions as the 1-based text used in ids and documents."""

    return ",".join(str(index + 1) for index in sorted(indices))


def disjoint_pairs(size: int, *, proper: bool = True) -> Iterator[FaceKey]:
    """All ``(A, B)`` with ``A ∩ B = ∅`` over ``size`` events; ``proper`` skips ``(∅, ∅)``."""

    for choice in itertools.product((0, 1, 2), repeat=size):
        lower = frozenset(i for i, side in enumerate(choice) if side == 1)
        upper = frozenset(i for i, side in enumerate(choice) if side == 2)
        if proper and not lower and not upper:
            continue
        yield lower, upper


def validate(complex_: Complex, variant: Variant | str | None = None) -> ValidationReport:
    """Check ``complex_`` against the rules of ``variant`` (default: its own tag)."""

    chosen = Variant(variant) if variant is not None else complex_.variant
    rules = get_rules(chosen)
    violations: list[Violation] = []
    if rules.functional:
        violations.extend(_check_functional(complex_))
    if rules.interfaces is InterfaceDiscipline.INTERFACE:
        violations.extend(_check_interfaces(complex_))
    elif rules.interfaces is InterfaceDiscipline.CONE:
        violations.extend(_check_cone(complex_))
    elif rules.total:
        violations.extend(_check_total(complex_))
    violations.extend(_check_composition(complex_, rules))
    _LOGGER.debug(
        "Validated %d cells as %s: %d violations", len(complex_), chosen.value, len(violations)
    )
    return ValidationReport(variant=chosen, violations=tuple(violations))


def classify(complex_: Complex) -> frozenset[Variant]:
    """Every variant whose conditions the face table satisfies."""

    return frozenset(variant for variant in Variant if validate(complex_, variant).valid)


def step_graph(complex_: Complex) -> nx.DiGraph:
    """Directed graph of up- and downsteps between cells."""

    graph = nx.DiGraph()
    graph.add_nodes_from(complex_.cells)
    graph.add_edges_from((lower, cell) for lower, cell, _ in complex_.upsteps())
    graph.add_edges_from((cell, upper) for cell, upper, _ in complex_.downsteps())
    return graph


def trim(complex_: Complex) -> Complex:
    """Keep the cells that lie on some path from an initial to an accepting cell."""

    graph = step_graph(complex_)
    forward: set[str] = set(complex_.bot)
    for cell_id in complex_.bot:
        forward |= nx.descendants(graph, cell_id)
    backward: set[str] = set(complex_.top)
    for cell_id in complex_.top:
        backward |= nx.ancestors(graph, cell_id)
    kept = forward & backward
    _LOGGER.debug("Trim kept %d of %d cells", len(kept), len(complex_))
    return complex_.restricted(kept)


def _check_functional(complex_: Complex) -> Iterator[Violation]:
    for cell_id, lower, upper, targets in complex_.face_entries():
        if len(targets) > 1:
            yield Violation(
                "functional",
                cell_id,
                f"face {_describe(lower, upper)} has {len(targets)} values {sorted(targets)}",
            )


def _check_total(complex_: Complex) -> Iterator[Violation]:
    for cell_id in sorted(complex_.cells):
        entries = complex_.faces.get(cell_id, {})
        for key in disjoint_pairs(complex_.cells[cell_id].dimension):
            if key not in entries:
                yield Violation("total", cell_id, f"face {_describe(*key)} is undefined")


def _check_interfaces(complex_: Complex) -> Iterator[Violation]:
    for cell_id in sorted(complex_.cells):
        cell = complex_.cells[cell_id]
        source, target = complex_.interfaces(cell_id)
        full = frozenset(range(cell.dimension))
        entries = complex_.faces.get(cell_id, {})
        for lower, upper in disjoint_pairs(cell.dimension):
            allowed = not (lower & source) and not (upper & target)
            key = (lower, upper)
            if not allowed:
                if key in entries:
                    yield Violation(
                        "interface",
                        cell_id,
                        f"face {_describe(lower, upper)} crosses the interface",
                    )
                continue
            if key not in entries:
                yield Violation("total", cell_id, f"face {_describe(lower, upper)} is undefined")
                continue
            removed = lower | upper
            expected = (
                push_indices(cell.dimension, removed, source - upper),
                push_indices(cell.dimension, removed, target - lower),
            )
            for face_id in sorted(entries[key]):
                if complex_.interfaces(face_id) != expected:
                    yield Violation(
                        "interface",
                        cell_id,
                        f"face {_describe(lower, upper)} value {face_id!r} has the wrong interfaces",
                    )
        if cell_id in complex_.bot and source != full:
            yield Violation("interface", cell_id, "initial cell must have a full source interface")
        if cell_id in complex_.top and target != full:
            yield Violation("interface", cell_id, "accepting cell must have a full target interface")


def _check_cone(complex_: Complex) -> Iterator[Violation]:
    for cell_id in sorted(complex_.cells):
        cell = complex_.cells[cell_id]
        source, target = complex_.interfaces(cell_id)
        entries = complex_.faces.get(cell_id, {})
        for lower, upper in sorted(entries, key=_key_order):
            if lower and upper:
                yield Violation("cone", cell_id, f"mixed face {_describe(lower, upper)}")
            elif lower & source or upper & target:
                yield Violation(
                    "interface", cell_id, f"face {_describe(lower, upper)} crosses the interface"
                )
        for lower, upper in _cone_keys(cell.dimension, source, target):
            key = (lower, upper)
            if key not in entries:
                yield Violation("total", cell_id, f"face {_describe(lower, upper)} is undefined")
                continue
            removed = lower | upper
            rest = frozenset(range(cell.dimension - len(removed)))
            if lower:
                expected = (push_indices(cell.dimension, removed, source), rest)
            else:
                expected = (rest, push_indices(cell.dimension, removed, target))
            for face_id in sorted(entries[key]):
                if complex_.interfaces(face_id) != expected:
                    yield Violation(
                        "cone",
                        cell_id,
                        f"face {_describe(lower, upper)} value {face_id!r} is not cone-typed",
                    )


def _cone_keys(size: int, source: IndexSet, target: IndexSet) -> Iterator[FaceKey]:
    events = frozenset(range(size))
    for lower in _nonempty_subsets(events - source):
        yield lower, _EMPTY
    for upper in _nonempty_subsets(events - target):
        yield _EMPTY, upper


def _check_composition(complex_: Complex, rules: VariantRules) -> Iterator[Violation]:
    strict = rules.composition is Composition.STRICT
    for cell_id in sorted(complex_.cells):
        size = complex_.cells[cell_id].dimension
        entries = complex_.faces.get(cell_id, {})
        for first in disjoint_pairs(size):
            first_removed = first[0] | first[1]
            middle = entries.get(first, frozenset())
            for second in disjoint_pairs(size - len(first_removed)):
                composite_key = (
                    first[0] | lift_indices(size, first_removed, second[0]),
                    first[1] | lift_indices(size, first_removed, second[1]),
                )
                composite = entries.get(composite_key, frozenset())
                through: set[str] = set()
                for face_id in middle:
                    through |= complex_.faces.get(face_id, {}).get(second, frozenset())
                if strict and through != composite:
                    yield Violation(
                        "strict",
                        cell_id,
                        f"{_describe(*second)} after {_describe(*first)} gives {sorted(through)}, "
                        f"composite {_describe(*composite_key)} gives {sorted(composite)}",
                    )
                elif not strict and not through <= composite:
                    yield Violation(
                        "lax",
                        cell_id,
                        f"{_describe(*second)} after {_describe(*first)} reaches "
                        f"{sorted(through - composite)} outside composite {_describe(*composite_key)}",
                    )


def _check_assembly(complex_: Complex) -> None:
    cells = complex_.cells
    for cell_id, cell in cells.items():
        if cell.id != cell_id:
            raise InvalidComplex(f"cell registered as {cell_id!r} carries id {cell.id!r}")
    for cell_id, entries in complex_.faces.items():
        if cell_id not in cells:
            raise UnknownCell(f"face table refers to unknown cell {cell_id!r}")
        cell = cells[cell_id]
        for key, targets in entries.items():
            _check_face_key(cell, key)
            removed = key[0] | key[1]
            expected = tuple(
                label for index, label in enumerate(cell.ev) if index not in removed
            )
            for target in targets:
                if target not in cells:
                    raise UnknownCell(f"face of {cell_id!r} refers to unknown cell {target!r}")
                if cells[target].ev != expected:
                    raise InvalidComplex(
                        f"face {_describe(*key)} of {cell_id!r} has type {list(cells[target].ev)}, "
                        f"expected {list(expected)}"
                    )
    for name, chosen in (("initial", complex_.bot), ("accepting", complex_.top)):
        unknown = sorted(chosen - cells.keys())
        if unknown:
            raise UnknownCell(f"{name} cells {unknown} do not exist")


def _check_face_key(cell: Cell, key: FaceKey) -> None:
    lower, upper = key
    if lower & upper:
        raise IndexOutOfRange(f"face index sets of {cell.id!r} overlap on {sorted(lower & upper)}")
    for index in lower | upper:
        if not 0 <= index < cell.dimension:
            raise IndexOutOfRange(
                f"face index {index + 1} outside 1..{cell.dimension} of cell {cell.id!r}"
            )


def _nonempty_subsets(items: Iterable[int]) -> Iterator[IndexSet]:
    pool = sorted(items)
    for size in range(1, len(pool) + 1):
        for chosen in itertools.combinations(pool, size):
            yield frozenset(chosen)


def _key_order(key: FaceKey) -> tuple[tuple[int, ...], tuple[int, ...]]:
    return tuple(sorted(key[0])), tuple(sorted(key[1]))


def _describe(lower: IndexSet, upper: IndexSet) -> str:
    def render(indices: IndexSet) -> str:
        return "{" + ",".join(str(index + 1) for index in sorted(indices)) + "}"

    return f"d({render(lower)},{render(upper)})"


__all__ = [
    "Cell",
    "Complex",
    "FaceEntry",
    "FaceKey",
    "ValidationReport",
    "Violation",
    "classify",
    "disjoint_pairs",
    "format_index_set",
    "lift_indices",
    "push_indices",
    "remaining_positions",
    "step_graph",
    "trim",
    "validate",
]
