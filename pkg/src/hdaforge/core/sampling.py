"""Seeded random generators for ipomsets, complexes, automata and expressions."""

from __future__ import annotations

import logging
import random
from collections.abc import Sequence

from hdaforge.core.automaton import PAutomaton, State, Transition
from hdaforge.core.complex import Cell, Complex
from hdaforge.core.ipomset import (
    Conclist,
    DiscreteStep,
    Ipomset,
    StepKind,
    compose,
    discrete,
    identity,
)
from hdaforge.core.kleene import (
    ConcatExpr,
    IdentityAtom,
    PlusExpr,
    RationalExpr,
    StarterAtom,
    TerminatorAtom,
    UnionExpr,
)
from hdaforge.core.variants import Variant
from hdaforge.utils.settings import get_settings
from hdaforge.utils.validators import validate_count

_LOGGER = logging.getLogger(__name__)

DEFAULT_ALPHABET: tuple[str, ...] = ("a", "b")


def seeded_rng(seed: int | None = None, *, offset: int = 0) -> random.Random:
    """A generator seeded from ``seed`` or the configured ``HDA_FORGE_SEED``."""

    base = get_settings().seed if seed is None else seed
    return random.Random(base + offset)


def random_steps(
    rng: random.Random,
    length: int,
    *,
    alphabet: Sequence[str] = DEFAULT_ALPHABET,
    max_width: int = 2,
) -> list[DiscreteStep]:
    """Alternating proper starters and terminators that start from nothing."""

    validate_count(length, name="length")
    validate_count(max_width, name="max_width", minimum=1)
    running: list[str] = []
    steps: list[DiscreteStep] = []
    for _ in range(length):
        last = steps[-1].kind if steps else StepKind.TERMINATOR
        start = last is StepKind.TERMINATOR and len(running) < max_width
        if not start and not running:
            break
        if start:
            count = rng.randint(1, max_width - len(running))
            base = list(running)
            positions: list[int] = []
            for _ in range(count):
                position = rng.randint(0, len(base))
                base.insert(position, rng.choice(alphabet))
                positions = [p + 1 if p >= position else p for p in positions] + [position]
            steps.append(DiscreteStep(StepKind.STARTER, tuple(base), frozenset(positions)))
            running = base
        else:
            chosen = _random_subset(rng, range(len(running)), nonempty=True)
            steps.append(DiscreteStep(StepKind.TERMINATOR, tuple(running), chosen))
            running = [label for index, label in enumerate(running) if index not in chosen]
    return steps


def random_ipomset(
    rng: random.Random,
    max_steps: int = 4,
    *,
    alphabet: Sequence[str] = DEFAULT_ALPHABET,
    max_width: int = 2,
) -> Ipomset:
    steps = random_steps(rng, rng.randint(0, max_steps), alphabet=alphabet, max_width=max_width)
    if not steps:
        return identity(())
    return compose(steps)


def random_total_hda(
    rng: random.Random,
    *,
    edges: int = 4,
    squares: int = 1,
    alphabet: Sequence[str] = DEFAULT_ALPHABET,
) -> Complex:
    """A total HDA of dimension at most two grown from one vertex.

    Edges leave existing vertices; a square is filled in over two edges sharing a source,
    adding the opposite corner and the two missing edges.
    """

    validate_count(edges, name="edges")
    validate_count(squares, name="squares")
    builder = _CubeBuilder()
    root = builder.vertex()
    for _ in range(edges):
        source = rng.choice(builder.vertices)
        target = rng.choice([*builder.vertices, None])
        builder.edge(rng.choice(alphabet), source, target or builder.vertex())
    for _ in range(squares):
        corners = [vertex for vertex in builder.vertices if len(builder.leaving(vertex)) >= 2]
        if not corners:
            break
        first, second = rng.sample(builder.leaving(rng.choice(corners)), 2)
        builder.square(first, second)
    bot = {root}
    if rng.random() < 0.3:
        bot.add(rng.choice(builder.vertices))
    top = set(rng.sample(builder.vertices, rng.randint(1, min(2, len(builder.vertices)))))
    if builder.squares and rng.random() < 0.3:
        top.add(rng.choice(builder.squares))
    return builder.build(Variant.HDA, bot, top)


def random_phda(
    rng: random.Random,
    *,
    edges: int = 4,
    squares: int = 1,
    drop: float = 0.3,
    alphabet: Sequence[str] = DEFAULT_ALPHABET,
) -> Complex:
    """A total HDA with some edge faces and single square faces removed.

    Only faces whose removal shrinks composites pass through are dropped, so the result
    still satisfies the lax composition law.
    """

    base = random_total_hda(rng, edges=edges, squares=squares, alphabet=alphabet)
    faces: list[tuple[str, frozenset[int], frozenset[int], frozenset[str]]] = []
    for cell_id, lower, upper, targets in base.face_entries():
        droppable = len(lower) + len(upper) == 1
        if droppable and rng.random() < drop:
            continue
        faces.append((cell_id, lower, upper, targets))
    return Complex.build(
        Variant.PHDA, base.cells.values(), faces, bot=base.bot, top=base.top
    )


def random_gsta(
    rng: random.Random,
    *,
    max_states: int = 6,
    max_width: int = 2,
    edges: int = 6,
    alphabet: Sequence[str] = DEFAULT_ALPHABET,
) -> PAutomaton:
    """A gST-automaton whose transitions are discrete ipomsets, identities included."""

    validate_count(max_states, name="max_states", minimum=1)
    states: dict[str, State] = {"q0": State("q0", ())}
    transitions: list[Transition] = []
    for index in range(edges):
        source = states[rng.choice(sorted(states))]
        label = _random_discrete(rng, source.mu, alphabet=alphabet, max_width=max_width)
        wanted = label.target_conclist()
        matching = sorted(state_id for state_id, state in states.items() if state.mu == wanted)
        if matching and (len(states) >= max_states or rng.random() < 0.5):
            target = rng.choice(matching)
        elif len(states) < max_states:
            target = f"q{len(states)}"
            states[target] = State(target, wanted)
        else:
            continue
        transitions.append(Transition(f"e{index}", source.id, target, label))
    ids = sorted(states)
    bot = {"q0"} | {state_id for state_id in ids if rng.random() < 0.15}
    top = set(rng.sample(ids, rng.randint(1, min(2, len(ids)))))
    return PAutomaton.build(states.values(), transitions, bot=bot, top=top)


def random_expr(
    rng: random.Random,
    depth: int = 3,
    *,
    start: Conclist = (),
    alphabet: Sequence[str] = DEFAULT_ALPHABET,
    max_width: int = 2,
) -> RationalExpr:
    """A typed random expression; concatenated parts agree on their interfaces."""

    validate_count(depth, name="depth")
    expr, _ = _typed_expr(rng, depth, tuple(start), alphabet, max_width)
    return expr


def _typed_expr(
    rng: random.Random,
    depth: int,
    start: Conclist,
    alphabet: Sequence[str],
    max_width: int,
) -> tuple[RationalExpr, Conclist]:
    if depth == 0:
        return _typed_atom(rng, start, alphabet, max_width)
    choice = rng.choice(("atom", "union", "concat", "concat", "plus"))
    if choice == "atom":
        return _typed_atom(rng, start, alphabet, max_width)
    if choice == "union":
        left, end = _typed_expr(rng, depth - 1, start, alphabet, max_width)
        right, _ = _typed_expr(rng, depth - 1, start, alphabet, max_width)
        return UnionExpr((left, right)), end
    if choice == "concat":
        left, middle = _typed_expr(rng, depth - 1, start, alphabet, max_width)
        right, end = _typed_expr(rng, depth - 1, middle, alphabet, max_width)
        return ConcatExpr((left, right)), end
    inner, end = _typed_expr(rng, depth - 1, start, alphabet, max_width)
    if end != start:
        closing: list[RationalExpr] = [inner]
        if end:
            closing.append(TerminatorAtom(end, frozenset(range(len(end)))))
        if start:
            closing.append(StarterAtom(start, frozenset(range(len(start)))))
        inner = ConcatExpr(tuple(closing))
    return PlusExpr(inner), start


def _typed_atom(
    rng: random.Random,
    start: Conclist,
    alphabet: Sequence[str],
    max_width: int,
) -> tuple[RationalExpr, Conclist]:
    can_start = len(start) < max_width
    if start and (not can_start or rng.random() < 0.5):
        chosen = _random_subset(rng, range(len(start)), nonempty=True)
        end = tuple(label for index, label in enumerate(start) if index not in chosen)
        return TerminatorAtom(start, chosen), end
    if can_start:
        position = rng.randint(0, len(start))
        base = (*start[:position], rng.choice(alphabet), *start[position:])
        return StarterAtom(base, frozenset({position})), base
    return IdentityAtom(start), start


def _random_discrete(
    rng: random.Random,
    source: Conclist,
    *,
    alphabet: Sequence[str],
    max_width: int,
) -> Ipomset:
    roll = rng.random()
    if roll < 0.1:
        return identity(source)
    base = list(source)
    kept = list(range(len(base)))
    if len(base) < max_width and (roll < 0.6 or not base):
        for _ in range(rng.randint(1, max_width - len(base))):
            position = rng.randint(0, len(base))
            base.insert(position, rng.choice(alphabet))
            kept = [index + 1 if index >= position else index for index in kept]
    everything = frozenset(range(len(base)))
    target = everything
    if base and rng.random() < 0.6:
        target = everything - _random_subset(rng, range(len(base)), nonempty=True)
    return discrete(base, frozenset(kept), target)


def _random_subset(rng: random.Random, items: range | Sequence[int], *, nonempty: bool) -> frozenset[int]:
    pool = list(items)
    while True:
        chosen = frozenset(item for item in pool if rng.random() < 0.5)
        if chosen or not nonempty or not pool:
            return chosen


class _CubeBuilder:
    def __init__(self) -> None:
        self.vertices: list[str] = []
        self.edges: dict[str, tuple[str, str, str]] = {}
        self.squares: list[str] = []
        self.cells: list[Cell] = []
        self.faces: list[tuple[str, frozenset[int], frozenset[int], list[str]]] = []

    def vertex(self) -> str:
        name = f"v{len(self.vertices)}"
        self.vertices.append(name)
        self.cells.append(Cell(name, ()))
        return name

    def edge(self, label: str, source: str, target: str) -> str:
        name = f"e{len(self.edges)}"
        self.edges[name] = (label, source, target)
        self.cells.append(Cell(name, (label,)))
        self.faces.append((name, frozenset({0}), frozenset(), [source]))
        self.faces.append((name, frozenset(), frozenset({0}), [target]))
        return name

    def leaving(self, vertex: str) -> list[str]:
        return [name for name, (_, source, _) in self.edges.items() if source == vertex]

    def square(self, first: str, second: str) -> str:
        first_label, corner, after_first = self.edges[first]
        second_label, _, after_second = self.edges[second]
        far = self.vertex()
        top = self.edge(first_label, after_second, far)
        right = self.edge(second_label, after_first, far)
        name = f"x{len(self.squares)}"
        self.squares.append(name)
        self.cells.append(Cell(name, (first_label, second_label)))
        one, two = frozenset({0}), frozenset({1})
        none: frozenset[int] = frozenset()
        both = one | two
        self.faces.extend(
            [
                (name, one, none, [second]),
                (name, none, one, [right]),
                (name, two, none, [first]),
                (name, none, two, [top]),
                (name, both, none, [corner]),
                (name, none, both, [far]),
                (name, one, two, [after_second]),
                (name, two, one, [after_first]),
            ]
        )
        return name

    def build(self, variant: Variant, bot: set[str], top: set[str]) -> Complex:
        result = Complex.build(variant, self.cells, self.faces, bot=bot, top=top)
        _LOGGER.debug("Sampled complex with %d cells", len(result))
        return result


__all__ = [
    "DEFAULT_ALPHABET",
    "random_expr",
    "random_gsta",
    "random_ipomset",
    "random_phda",
    "random_steps",
    "random_total_hda",
    "seeded_rng",
]
