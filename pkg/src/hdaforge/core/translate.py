"""Language-preserving translations between complex variants and automata.

Every edge of the translation graph is a plain function; :func:`convert` walks the
shortest chain of them between two model kinds.
"""

from __future__ import annotations

import itertools
import logging
from collections.abc import Callable, Iterable, Iterator
from enum import StrEnum

import networkx as nx
from networkx.utils import UnionFind

from hdaforge.core.automaton import (
    PAutomaton,
    State,
    Transition,
    classify_automaton,
    reduce,
)
from hdaforge.core.complex import (
    Cell,
    Complex,
    disjoint_pairs,
    format_index_set,
    lift_indices,
    push_indices,
    validate,
)
from hdaforge.core.exceptions import NoTranslationPath, NotReduced, PreconditionViolated
from hdaforge.core.ipomset import IndexSet, starter, terminator
from hdaforge.core.variants import Variant, ensure_included

_LOGGER = logging.getLogger(__name__)

Model = Complex | PAutomaton


class ModelKind(StrEnum):
    """Nodes of the translation graph: the complex variants plus automaton classes."""

    HDA = "HDA"
    IHDA = "iHDA"
    CONE = "coneHDA"
    SPHDA = "spHDA"
    SRHDA = "srHDA"
    PHDA = "pHDA"
    RHDA = "rHDA"
    STA = "STA"
    GSTA = "gSTA"
    PA = "PA"
    REDUCED = "reduced"

    @property
    def is_complex(self) -> bool:
        return self.value in {variant.value for variant in Variant}


def widen(complex_: Complex, target: Variant | str) -> Complex:
    """Retag along an inclusion edge; the face table is reused as is."""

    chosen = Variant(target)
    ensure_included(complex_.variant, chosen)
    return complex_.with_variant(chosen)


def hda_to_ihda(complex_: Complex) -> Complex:
    """Interface resolution: one cell ``(x|S|T)`` per cell and pair of interfaces."""

    _require_valid(complex_, Variant.HDA)
    cells: list[Cell] = []
    faces: list[tuple[str, IndexSet, IndexSet, list[str]]] = []
    for cell_id in sorted(complex_.cells):
        size = complex_.cells[cell_id].dimension
        for source, target in _interface_pairs(size):
            name = resolved_id(cell_id, source, target)
            cells.append(Cell(name, complex_.ev(cell_id), source, target))
            for lower, upper in disjoint_pairs(size):
                if lower & source or upper & target:
                    continue
                removed = lower | upper
                face_source = push_indices(size, removed, source - upper)
                face_target = push_indices(size, removed, target - lower)
                faces.append(
                    (
                        name,
                        lower,
                        upper,
                        [
                            resolved_id(face, face_source, face_target)
                            for face in sorted(complex_.face(cell_id, lower, upper))
                        ],
                    )
                )
    bot, top = _resolved_endpoints(complex_)
    result = Complex.build(Variant.IHDA, cells, faces, bot, top)
    _LOGGER.debug("Resolved %d cells into %d iHDA cells", len(complex_), len(result))
    return result


def hda_to_cone(complex_: Complex) -> Complex:
    """Cone resolution: lower faces land in cells with a full target interface, upper in full source."""

    _require_valid(complex_, Variant.HDA)
    cells: list[Cell] = []
    faces: list[tuple[str, IndexSet, IndexSet, list[str]]] = []
    for cell_id in sorted(complex_.cells):
        size = complex_.cells[cell_id].dimension
        for source, target in _interface_pairs(size):
            name = resolved_id(cell_id, source, target)
            cells.append(Cell(name, complex_.ev(cell_id), source, target))
            events = frozenset(range(size))
            for lower in _nonempty_subsets(events - source):
                rest = frozenset(range(size - len(lower)))
                faces.append(
                    (
                        name,
                        lower,
                        frozenset(),
                        [
                            resolved_id(face, push_indices(size, lower, source), rest)
                            for face in sorted(complex_.face(cell_id, lower, ()))
                        ],
                    )
                )
            for upper in _nonempty_subsets(events - target):
                rest = frozenset(range(size - len(upper)))
                faces.append(
                    (
                        name,
                        frozenset(),
                        upper,
                        [
                            resolved_id(face, rest, push_indices(size, upper, target))
                            for face in sorted(complex_.face(cell_id, (), upper))
                        ],
                    )
                )
    bot, top = _resolved_endpoints(complex_)
    result = Complex.build(Variant.CONE, cells, faces, bot, top)
    _LOGGER.debug("Resolved %d cells into %d cone cells", len(complex_), len(result))
    return result


def ihda_to_sphda(complex_: Complex) -> Complex:
    """Forget interfaces; faces crossing an interface become undefined."""

    _require_valid(complex_, Variant.IHDA)
    return _forget_interfaces(complex_, allow_mixed=True)


def cone_to_sphda(complex_: Complex) -> Complex:
    """Forget cone typing; only the generating cone faces survive."""

    _require_valid(complex_, Variant.CONE)
    return _forget_interfaces(complex_, allow_mixed=False)


def st_of(complex_: Complex) -> PAutomaton:
    """Operational semantics: one transition per up- and downstep."""

    states = [State(cell_id, complex_.ev(cell_id)) for cell_id in sorted(complex_.cells)]
    edges: list[Transition] = []
    for lower, higher, indices in complex_.upsteps():
        edges.append(
            Transition(
                f"{lower}>{higher}/S{format_index_set(indices)}",
                lower,
                higher,
                starter(complex_.ev(higher), indices),
            )
        )
    for higher, lower, indices in complex_.downsteps():
        edges.append(
            Transition(
                f"{higher}>{lower}/T{format_index_set(indices)}",
                higher,
                lower,
                terminator(complex_.ev(higher), indices),
            )
        )
    return PAutomaton.build(states, edges, complex_.bot, complex_.top)


def phda_of_gsta(automaton: PAutomaton) -> Complex:
    """Partial HDA on states and transitions, pure starters and terminators merged into states."""

    _require_reduced(automaton)
    classes = UnionFind()
    for state_id in automaton.states:
        classes.union(("q", state_id))
    for edge in automaton.sorted_edges():
        node = ("e", edge.id)
        classes.union(node)
        if edge.label.is_terminator:
            classes.union(node, ("q", edge.source))
        elif edge.label.is_starter:
            classes.union(node, ("q", edge.target))

    names: dict[tuple[str, str], str] = {}
    for group in classes.to_sets():
        members = sorted(group)
        states = [member for member in members if member[0] == "q"]
        chosen = states[0] if states else members[0]
        for member in members:
            names[member] = f"{chosen[0]}:{chosen[1]}"

    cells: dict[str, Cell] = {}
    for state_id, state in automaton.states.items():
        name = names[("q", state_id)]
        cells[name] = Cell(name, state.mu)
    faces: list[tuple[str, IndexSet, IndexSet, list[str]]] = []
    for edge in automaton.sorted_edges():
        view = edge.label.as_iconclist()
        name = names[("e", edge.id)]
        cells.setdefault(name, Cell(name, view.base))
        full = frozenset(range(len(view.base)))
        faces.append((name, full - view.source, frozenset(), [names[("q", edge.source)]]))
        faces.append((name, frozenset(), full - view.target, [names[("q", edge.target)]]))

    result = Complex.build(
        Variant.PHDA,
        cells.values(),
        faces,
        bot=[names[("q", q)] for q in automaton.bot],
        top=[names[("q", q)] for q in automaton.top],
    )
    _LOGGER.debug("Built pHDA with %d cells from %d transitions", len(result), len(automaton.edges))
    return result


def cone_of_gsta(automaton: PAutomaton) -> Complex:
    """Cone HDA: one representable cone per transition glued along the states."""

    _require_reduced(automaton)
    initial_edges = {e.id for e in automaton.sorted_edges() if e.label.is_terminator}
    final_edges = {e.id for e in automaton.sorted_edges() if e.label.is_starter}
    touched = {automaton.edges[e].source for e in initial_edges} | {
        automaton.edges[e].target for e in final_edges
    }
    middle_states = sorted(set(automaton.states) - touched)

    cells: dict[str, Cell] = {}
    faces: list[tuple[str, IndexSet, IndexSet, list[str]]] = []
    classes = UnionFind()
    for state_id in middle_states:
        mu = automaton.states[state_id].mu
        full = frozenset(range(len(mu)))
        name = f"z:{state_id}"
        cells[name] = Cell(name, mu, full, full)

    for edge in automaton.sorted_edges():
        view = edge.label.as_iconclist()
        size = len(view.base)
        events = frozenset(range(size))
        middle = cone_cell_id(edge.id, None, None)
        cells[middle] = Cell(middle, view.base, view.source, view.target)
        for lower in _nonempty_subsets(events - view.source):
            name = cone_cell_id(edge.id, lower, None)
            rest = frozenset(range(size - len(lower)))
            ev = tuple(label for i, label in enumerate(view.base) if i not in lower)
            cells[name] = Cell(name, ev, push_indices(size, lower, view.source), rest)
            faces.append((middle, lower, frozenset(), [name]))
            for further in _nonempty_subsets(rest - push_indices(size, lower, view.source)):
                combined = lower | lift_indices(size, lower, further)
                faces.append((name, further, frozenset(), [cone_cell_id(edge.id, combined, None)]))
        for upper in _nonempty_subsets(events - view.target):
            name = cone_cell_id(edge.id, None, upper)
            rest = frozenset(range(size - len(upper)))
            ev = tuple(label for i, label in enumerate(view.base) if i not in upper)
            cells[name] = Cell(name, ev, rest, push_indices(size, upper, view.target))
            faces.append((middle, frozenset(), upper, [name]))
            for further in _nonempty_subsets(rest - push_indices(size, upper, view.target)):
                combined = upper | lift_indices(size, upper, further)
                faces.append((name, frozenset(), further, [cone_cell_id(edge.id, None, combined)]))
        if edge.id not in initial_edges:
            classes.union(f"z:{edge.source}", cone_cell_id(edge.id, events - view.source, None))
        if edge.id not in final_edges:
            classes.union(f"z:{edge.target}", cone_cell_id(edge.id, None, events - view.target))

    for name in cells:
        classes.union(name)
    names: dict[str, str] = {}
    for group in classes.to_sets():
        members = sorted(group)
        glued = [member for member in members if member.startswith("z:")]
        chosen = glued[0] if glued else members[0]
        for member in members:
            names[member] = chosen

    bot = [f"z:{q}" for q in middle_states if q in automaton.bot]
    bot += [cone_cell_id(e, None, None) for e in sorted(initial_edges)]
    top = [f"z:{q}" for q in middle_states if q in automaton.top]
    top += [cone_cell_id(e, None, None) for e in sorted(final_edges)]
    result = Complex.build(
        Variant.CONE,
        [cell for name, cell in sorted(cells.items()) if names[name] == name],
        [(names[cell], lower, upper, [names[t] for t in targets]) for cell, lower, upper, targets in faces],
        bot=[names[name] for name in bot],
        top=[names[name] for name in top],
    )
    _LOGGER.debug("Built cone HDA with %d cells from %d transitions", len(result), len(automaton.edges))
    return result


def resolved_id(cell_id: str, source: Iterable[int], target: Iterable[int]) -> str:
    return f"({cell_id}|{format_index_set(source)}|{format_index_set(target)})"


def cone_cell_id(edge_id: str, lower: IndexSet | None, upper: IndexSet | None) -> str:
    if lower is not None:
        return f"y:{edge_id}:0:{format_index_set(lower)}"
    if upper is not None:
        return f"y:{edge_id}:1:{format_index_set(upper)}"
    return f"y:{edge_id}:*"


def automaton_kind(automaton: PAutomaton) -> ModelKind:
    flags = classify_automaton(automaton)
    if flags.is_reduced:
        return ModelKind.REDUCED
    if flags.is_st:
        return ModelKind.STA
    if flags.is_gst:
        return ModelKind.GSTA
    return ModelKind.PA


def model_kind(model: Model) -> ModelKind:
    if isinstance(model, PAutomaton):
        return automaton_kind(model)
    return ModelKind(model.variant.value)


def translation_graph() -> nx.DiGraph:
    """Directed graph of model kinds whose edges carry their translation function."""

    graph = nx.DiGraph()
    graph.add_nodes_from(ModelKind)
    for source, target, step in _translation_edges():
        graph.add_edge(source, target, step=step)
    return graph


def translation_path(source: ModelKind | str, target: ModelKind | str) -> list[ModelKind]:
    graph = translation_graph()
    try:
        path = nx.shortest_path(graph, ModelKind(source), ModelKind(target))
    except nx.NetworkXNoPath as exc:
        raise NoTranslationPath(f"no translation from {source} to {target}") from exc
    return [ModelKind(node) for node in path]


def convert(model: Model, target: ModelKind | str, *, source: ModelKind | str | None = None) -> Model:
    """Apply the shortest chain of translations from the model's kind to ``target``."""

    start = ModelKind(source) if source is not None else model_kind(model)
    if start.is_complex:
        if not isinstance(model, Complex):
            raise PreconditionViolated(f"{start.value} names a complex variant")
        _require_valid(model, Variant(start.value))
        model = model.with_variant(Variant(start.value))
    path = translation_path(start, target)
    graph = translation_graph()
    current = model
    for before, after in itertools.pairwise(path):
        step: Callable[[Model], Model] = graph.edges[before, after]["step"]
        current = step(current)
        _LOGGER.debug("Translated %s -> %s", before.value, after.value)
    return current


def _translation_edges() -> Iterator[tuple[ModelKind, ModelKind, Callable[[Model], Model]]]:
    for source, target in (
        (Variant.HDA, Variant.SPHDA),
        (Variant.SPHDA, Variant.SRHDA),
        (Variant.SPHDA, Variant.PHDA),
        (Variant.SRHDA, Variant.RHDA),
        (Variant.PHDA, Variant.RHDA),
    ):
        yield ModelKind(source.value), ModelKind(target.value), _widen_to(target)
    yield ModelKind.HDA, ModelKind.IHDA, hda_to_ihda
    yield ModelKind.HDA, ModelKind.CONE, hda_to_cone
    yield ModelKind.IHDA, ModelKind.SPHDA, ihda_to_sphda
    yield ModelKind.CONE, ModelKind.SPHDA, cone_to_sphda
    yield ModelKind.RHDA, ModelKind.STA, st_of
    yield ModelKind.STA, ModelKind.GSTA, _same_automaton
    yield ModelKind.REDUCED, ModelKind.GSTA, _same_automaton
    yield ModelKind.GSTA, ModelKind.PA, _same_automaton
    yield ModelKind.PA, ModelKind.REDUCED, reduce
    yield ModelKind.REDUCED, ModelKind.PHDA, phda_of_gsta
    yield ModelKind.REDUCED, ModelKind.CONE, cone_of_gsta


def _widen_to(target: Variant) -> Callable[[Complex], Complex]:
    def step(complex_: Complex) -> Complex:
        return widen(complex_, target)

    return step


def _same_automaton(automaton: PAutomaton) -> PAutomaton:
    return automaton


def _forget_interfaces(complex_: Complex, *, allow_mixed: bool) -> Complex:
    cells = [Cell(cell_id, complex_.ev(cell_id)) for cell_id in sorted(complex_.cells)]
    faces: list[tuple[str, IndexSet, IndexSet, frozenset[str]]] = []
    for cell_id, lower, upper, targets in complex_.face_entries():
        source, target = complex_.interfaces(cell_id)
        if lower & source or upper & target:
            continue
        if lower and upper and not allow_mixed:
            continue
        faces.append((cell_id, lower, upper, targets))
    return Complex.build(Variant.SPHDA, cells, faces, complex_.bot, complex_.top)


def _resolved_endpoints(complex_: Complex) -> tuple[list[str], list[str]]:
    bot: list[str] = []
    top: list[str] = []
    for cell_id in sorted(complex_.cells):
        size = complex_.cells[cell_id].dimension
        full = frozenset(range(size))
        for other in _all_subsets(full):
            if cell_id in complex_.bot:
                bot.append(resolved_id(cell_id, full, other))
            if cell_id in complex_.top:
                top.append(resolved_id(cell_id, other, full))
    return bot, top


def _interface_pairs(size: int) -> Iterator[tuple[IndexSet, IndexSet]]:
    everything = frozenset(range(size))
    for source in _all_subsets(everything):
        for target in _all_subsets(everything):
            yield source, target


def _all_subsets(items: Iterable[int]) -> Iterator[IndexSet]:
    pool = sorted(items)
    for size in range(len(pool) + 1):
        for chosen in itertools.combinations(pool, size):
            yield frozenset(chosen)


def _nonempty_subsets(items: Iterable[int]) -> Iterator[IndexSet]:
    for subset in _all_subsets(items):
        if subset:
            yield subset


def _require_valid(complex_: Complex, variant: Variant) -> None:
    report = validate(complex_, variant)
    if not report.valid:
        first = report.violations[0]
        raise PreconditionViolated(
            f"input is not a valid {variant.value}: {first.rule} at {first.cell!r}: {first.detail}"
        )


def _require_reduced(automaton: PAutomaton) -> None:
    if not classify_automaton(automaton).is_reduced:
        raise NotReduced("the construction needs a reduced gST-automaton")


__all__ = [
    "Model",
    "ModelKind",
    "automaton_kind",
    "cone_cell_id",
    "cone_of_gsta",
    "cone_to_sphda",
    "convert",
    "hda_to_cone",
    "hda_to_ihda",
    "ihda_to_sphda",
    "model_kind",
    "phda_of_gsta",
    "resolved_id",
    "st_of",
    "translation_graph",
    "translation_path",
    "widen",
]
