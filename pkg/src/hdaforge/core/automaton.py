"""P-automata, their subclasses and the reduction pipeline to reduced gST-automata."""

from __future__ import annotations

import logging
from collections.abc import Callable, Iterable, Mapping
from dataclasses import dataclass, field

import networkx as nx

from hdaforge.core.exceptions import (
    InvalidAutomaton,
    NotBadStarter,
    NotBadTerminator,
    PreconditionViolated,
    UnknownCell,
)
from hdaforge.core.ipomset import Conclist, Ipomset, canon, glue, sparse_decompose

_LOGGER = logging.getLogger(__name__)

REDUCED_CONDITIONS = ("a", "b", "c", "d", "e", "f")


@dataclass(frozen=True, slots=True)
class State:
    id: str
    mu: Conclist


@dataclass(frozen=True, slots=True)
class Transition:
    id: str
    source: str
    target: str
    label: Ipomset

    @property
    def dimension(self) -> int:
        return self.label.size


@dataclass(frozen=True, slots=True)
class PAutomaton:
    """Transition system over ipomset letters with state typing ``mu``.

    Every transition's label must have the source state's conclist as its source
    interface and the target state's conclist as its target interface.
    """

    states: Mapping[str, State] = field(default_factory=dict)
    edges: Mapping[str, Transition] = field(default_factory=dict)
    bot: frozenset[str] = frozenset()
    top: frozenset[str] = frozenset()

    def __post_init__(self) -> None:
        _check_typing(self)

    @classmethod
    def build(
        cls,
        states: Iterable[State],
        edges: Iterable[Transition] = (),
        bot: Iterable[str] = (),
        top: Iterable[str] = (),
    ) -> PAutomaton:
        by_state: dict[str, State] = {}
        for state in states:
            if state.id in by_state:
                raise InvalidAutomaton(f"duplicate state id {state.id!r}")
            by_state[state.id] = state
        by_edge: dict[str, Transition] = {}
        for edge in edges:
            if edge.id in by_edge:
                raise InvalidAutomaton(f"duplicate transition id {edge.id!r}")
            by_edge[edge.id] = edge
        return cls(states=by_state, edges=by_edge, bot=frozenset(bot), top=frozenset(top))

    def state(self, state_id: str) -> State:
        try:
            return self.states[state_id]
        except KeyError as exc:
            raise UnknownCell(f"unknown state {state_id!r}") from exc

    def edge(self, edge_id: str) -> Transition:
        try:
            return self.edges[edge_id]
        except KeyError as exc:
            raise UnknownCell(f"unknown transition {edge_id!r}") from exc

    def outgoing(self, state_id: str) -> tuple[Transition, ...]:
        return tuple(
            self.edges[edge_id]
            for edge_id in sorted(self.edges)
            if self.edges[edge_id].source == state_id
        )

    def incoming(self, state_id: str) -> tuple[Transition, ...]:
        return tuple(
            self.edges[edge_id]
            for edge_id in sorted(self.edges)
            if self.edges[edge_id].target == state_id
        )

    def sorted_edges(self) -> tuple[Transition, ...]:
        return tuple(self.edges[edge_id] for edge_id in sorted(self.edges))


@dataclass(frozen=True, slots=True)
class AutomatonClass:
    """Subclass flags of a P-automaton; ``conditions`` holds the reducedness checks (a)-(f)."""

    is_st: bool
    is_gst: bool
    is_proper: bool
    no_silent: bool
    conditions: Mapping[str, bool]
    is_rhda_image: bool

    @property
    def is_reduced(self) -> bool:
        return self.is_gst and self.no_silent and all(self.conditions.values())


@dataclass(frozen=True, slots=True)
class AutomatonViolation:
    rule: str
    edges: tuple[str, ...]
    detail: str


@dataclass(frozen=True, slots=True)
class BadTransitionCounts:
    """Bad starter and bad terminator transitions, counted per dimension."""

    starters: Mapping[int, int]
    terminators: Mapping[int, int]

    def starter_count(self, dimension: int) -> int:
        return self.starters.get(dimension, 0)

    def terminator_count(self, dimension: int) -> int:
        return self.terminators.get(dimension, 0)

    @property
    def total(self) -> int:
        return sum(self.starters.values()) + sum(self.terminators.values())


def is_st_label(label: Ipomset) -> bool:
    return label.is_starter or label.is_terminator


def is_proper_starter(label: Ipomset) -> bool:
    return label.is_starter and not label.is_identity


def is_proper_terminator(label: Ipomset) -> bool:
    return label.is_terminator and not label.is_identity


def classify_automaton(automaton: PAutomaton) -> AutomatonClass:
    edges = automaton.sorted_edges()
    conditions = {
        "a": all(not automaton.incoming(q) for q in automaton.bot),
        "b": all(not automaton.outgoing(q) for q in automaton.top),
        "c": all(e.target in automaton.top for e in edges if e.label.is_starter),
        "d": all(e.source in automaton.bot for e in edges if e.label.is_terminator),
        "e": all(len(automaton.outgoing(q)) <= 1 for q in automaton.bot),
        "f": all(len(automaton.incoming(q)) <= 1 for q in automaton.top),
    }
    return AutomatonClass(
        is_st=all(is_st_label(e.label) for e in edges),
        is_gst=all(e.label.is_discrete for e in edges),
        is_proper=all(e.source not in automaton.top and e.target not in automaton.bot for e in edges),
        no_silent=not any(e.label.is_identity for e in edges),
        conditions=conditions,
        is_rhda_image=not rhda_image_violations(automaton),
    )


def rhda_image_violations(automaton: PAutomaton) -> tuple[AutomatonViolation, ...]:
    """Reasons why the automaton cannot be the ST-automaton of a relational HDA.

    Such automata have no identity transitions and contain the composite of every
    consecutive pair of proper starters, and of every pair of proper terminators.
    """

    violations: list[AutomatonViolation] = []
    for edge in automaton.sorted_edges():
        if edge.label.is_identity:
            violations.append(AutomatonViolation("silent", (edge.id,), "identity transition"))

    for kind, predicate in (("starter", is_proper_starter), ("terminator", is_proper_terminator)):
        for first in automaton.sorted_edges():
            if not predicate(first.label):
                continue
            for second in automaton.outgoing(first.target):
                if not predicate(second.label):
                    continue
                wanted = canon(glue(first.label, second.label))
                present = any(
                    candidate.target == second.target and canon(candidate.label) == wanted
                    for candidate in automaton.outgoing(first.source)
                )
                if not present:
                    violations.append(
                        AutomatonViolation(
                            f"{kind}-composite",
                            (first.id, second.id),
                            f"no {kind} from {first.source!r} to {second.target!r} "
                            f"composing {first.id!r} and {second.id!r}",
                        )
                    )
    return tuple(violations)


def bad_transition_counts(automaton: PAutomaton) -> BadTransitionCounts:
    starters: dict[int, int] = {}
    terminators: dict[int, int] = {}
    for edge in automaton.sorted_edges():
        if _is_bad_starter(automaton, edge):
            starters[edge.dimension] = starters.get(edge.dimension, 0) + 1
        elif _is_bad_terminator(automaton, edge):
            terminators[edge.dimension] = terminators.get(edge.dimension, 0) + 1
    return BadTransitionCounts(starters=starters, terminators=terminators)


def reverse_automaton(automaton: PAutomaton) -> PAutomaton:
    """Swap transition directions, initial and accepting states, and reverse every label."""

    return PAutomaton(
        states=dict(automaton.states),
        edges={
            edge.id: Transition(edge.id, edge.target, edge.source, edge.label.reversed())
            for edge in automaton.sorted_edges()
        },
        bot=automaton.top,
        top=automaton.bot,
    )


def remove_silent(automaton: PAutomaton) -> PAutomaton:
    """Drop identity transitions by closing every state over identity paths."""

    silent = nx.DiGraph()
    silent.add_nodes_from(automaton.states)
    silent.add_edges_from(
        (edge.source, edge.target) for edge in automaton.sorted_edges() if edge.label.is_identity
    )
    if silent.number_of_edges() == 0:
        return automaton

    edges: dict[str, Transition] = {}
    taken = set(automaton.edges)
    top: set[str] = set()
    for state_id in sorted(automaton.states):
        closure = {state_id} | nx.descendants(silent, state_id)
        if closure & automaton.top:
            top.add(state_id)
        for reached in sorted(closure):
            for edge in automaton.outgoing(reached):
                if edge.label.is_identity:
                    continue
                edge_id = edge.id if reached == state_id else _fresh(f"{edge.id}~{state_id}", taken)
                edges[edge_id] = Transition(edge_id, state_id, edge.target, edge.label)
    _LOGGER.debug("Removed %d silent transitions", silent.number_of_edges())
    return PAutomaton(states=dict(automaton.states), edges=edges, bot=automaton.bot, top=frozenset(top))


def p_to_st(automaton: PAutomaton) -> PAutomaton:
    """Replace every label that is neither starter nor terminator by its sparse chain."""

    states = dict(automaton.states)
    edges: dict[str, Transition] = {}
    taken_states = set(states)
    taken_edges = set(automaton.edges)
    for edge in automaton.sorted_edges():
        if is_st_label(edge.label):
            edges[edge.id] = edge
            continue
        steps = sparse_decompose(edge.label).steps
        previous = edge.source
        for position, step in enumerate(steps, start=1):
            if position == len(steps):
                target = edge.target
            else:
                target = _fresh(f"{edge.id}.{position}", taken_states)
                states[target] = State(target, step.target_conclist())
            edge_id = _fresh(f"{edge.id}.{position}", taken_edges)
            edges[edge_id] = Transition(edge_id, previous, target, step.to_ipomset())
            previous = target
    return PAutomaton(states=states, edges=edges, bot=automaton.bot, top=automaton.top)


def reduce_ab(automaton: PAutomaton) -> PAutomaton:
    """Add fresh initial and accepting copies so nothing enters ⊥ or leaves ⊤."""

    flags = classify_automaton(automaton)
    if not flags.is_gst or not flags.no_silent:
        raise PreconditionViolated("initial/accepting separation needs a gST-automaton without silent transitions")

    states = dict(automaton.states)
    edges = dict(automaton.edges)
    taken_states = set(states)
    taken_edges = set(edges)
    lower: dict[str, str] = {}
    upper: dict[str, str] = {}
    both: dict[str, str] = {}
    for state_id in sorted(automaton.bot):
        lower[state_id] = _fresh(f"{state_id}⊥", taken_states)
    for state_id in sorted(automaton.top):
        upper[state_id] = _fresh(f"{state_id}⊤", taken_states)
    for state_id in sorted(automaton.bot & automaton.top):
        both[state_id] = _fresh(f"{state_id}⊥⊤", taken_states)
    for copies in (lower, upper, both):
        for original, copy in copies.items():
            states[copy] = State(copy, automaton.states[original].mu)

    for edge in automaton.sorted_edges():
        if edge.source in lower:
            edge_id = _fresh(f"{edge.id}⊥", taken_edges)
            edges[edge_id] = Transition(edge_id, lower[edge.source], edge.target, edge.label)
        if edge.target in upper:
            edge_id = _fresh(f"{edge.id}⊤", taken_edges)
            edges[edge_id] = Transition(edge_id, edge.source, upper[edge.target], edge.label)
        if edge.source in lower and edge.target in upper:
            edge_id = _fresh(f"{edge.id}⊥⊤", taken_edges)
            edges[edge_id] = Transition(edge_id, lower[edge.source], upper[edge.target], edge.label)

    return PAutomaton(
        states=states,
        edges=edges,
        bot=frozenset(lower.values()) | frozenset(both.values()),
        top=frozenset(upper.values()) | frozenset(both.values()),
    )


def eliminate_bad_starter(automaton: PAutomaton, edge_id: str) -> PAutomaton:
    """Remove the bad starter ``edge_id``, shortcutting it into every following transition."""

    chosen = automaton.edge(edge_id)
    if not _is_bad_starter(automaton, chosen):
        raise NotBadStarter(f"transition {edge_id!r} is not a bad starter")
    _require_ab(automaton)

    edges = {key: edge for key, edge in automaton.edges.items() if key != edge_id}
    taken = set(automaton.edges)
    for follower in automaton.outgoing(chosen.target):
        new_id = _fresh(f"{edge_id}*{follower.id}", taken)
        edges[new_id] = Transition(
            new_id, chosen.source, follower.target, glue(chosen.label, follower.label)
        )
    return PAutomaton(states=dict(automaton.states), edges=edges, bot=automaton.bot, top=automaton.top)


def eliminate_bad_terminator(automaton: PAutomaton, edge_id: str) -> PAutomaton:
    """Mirror image of :func:`eliminate_bad_starter`, run on the reversed automaton."""

    chosen = automaton.edge(edge_id)
    if not _is_bad_terminator(automaton, chosen):
        raise NotBadTerminator(f"transition {edge_id!r} is not a bad terminator")
    mirrored = eliminate_bad_starter(reverse_automaton(automaton), edge_id)
    return reverse_automaton(mirrored)


def split_endpoints(automaton: PAutomaton) -> PAutomaton:
    """Give every initial state one outgoing and every accepting state one incoming transition."""

    _require_ab(automaton)
    keep = (set(automaton.states) - automaton.bot - automaton.top) | (automaton.bot & automaton.top)
    states = {state_id: automaton.states[state_id] for state_id in keep}
    taken = set(automaton.states)
    bot = set(automaton.bot & automaton.top)
    top = set(automaton.bot & automaton.top)
    edges: dict[str, Transition] = {}
    for edge in automaton.sorted_edges():
        source, target = edge.source, edge.target
        if source in automaton.bot:
            source = _fresh(f"⊥{edge.id}", taken)
            states[source] = State(source, automaton.states[edge.source].mu)
            bot.add(source)
        if target in automaton.top:
            target = _fresh(f"⊤{edge.id}", taken)
            states[target] = State(target, automaton.states[edge.target].mu)
            top.add(target)
        edges[edge.id] = Transition(edge.id, source, target, edge.label)
    return PAutomaton(states=states, edges=edges, bot=frozenset(bot), top=frozenset(top))


def reduce(automaton: PAutomaton) -> PAutomaton:
    """Turn any P-automaton into a reduced gST-automaton with the same language."""

    if classify_automaton(automaton).is_reduced:
        return automaton
    stages: tuple[tuple[str, Callable[[PAutomaton], PAutomaton]], ...] = (
        ("remove_silent", remove_silent),
        ("p_to_st", p_to_st),
        ("reduce_ab", reduce_ab),
        ("eliminate_bad", eliminate_bad_transitions),
        ("split_endpoints", split_endpoints),
    )
    current = automaton
    for name, stage in stages:
        current = stage(current)
        _LOGGER.debug(
            "Stage %s: %d states, %d transitions", name, len(current.states), len(current.edges)
        )
    return current


def eliminate_bad_transitions(automaton: PAutomaton) -> PAutomaton:
    """Eliminate bad starters and terminators, lowest dimension first, then by id."""

    current = automaton
    while True:
        candidates = sorted(
            (edge.dimension, edge.id)
            for edge in current.sorted_edges()
            if _is_bad_starter(current, edge) or _is_bad_terminator(current, edge)
        )
        if not candidates:
            return current
        _, edge_id = candidates[0]
        if _is_bad_starter(current, current.edges[edge_id]):
            current = eliminate_bad_starter(current, edge_id)
        else:
            current = eliminate_bad_terminator(current, edge_id)


def relabeled(
    automaton: PAutomaton,
    state_names: Mapping[str, str],
    edge_names: Mapping[str, str],
) -> PAutomaton:
    states = {state_names[q]: State(state_names[q], state.mu) for q, state in automaton.states.items()}
    edges = {
        edge_names[e]: Transition(
            edge_names[e], state_names[edge.source], state_names[edge.target], edge.label
        )
        for e, edge in automaton.edges.items()
    }
    return PAutomaton(
        states=states,
        edges=edges,
        bot=frozenset(state_names[q] for q in automaton.bot),
        top=frozenset(state_names[q] for q in automaton.top),
    )


def prefixed(automaton: PAutomaton, prefix: str) -> PAutomaton:
    return relabeled(
        automaton,
        {q: f"{prefix}{q}" for q in automaton.states},
        {e: f"{prefix}{e}" for e in automaton.edges},
    )


def renumbered(automaton: PAutomaton) -> PAutomaton:
    """Rename states ``q0, q1, ...`` and transitions ``e0, e1, ...`` in id order."""

    return relabeled(
        automaton,
        {q: f"q{index}" for index, q in enumerate(sorted(automaton.states))},
        {e: f"e{index}" for index, e in enumerate(sorted(automaton.edges))},
    )


def disjoint_sum(left: PAutomaton, right: PAutomaton) -> PAutomaton:
    """Side-by-side union; ids are tagged ``l.``/``r.`` to keep them apart."""

    first = prefixed(left, "l.")
    second = prefixed(right, "r.")
    return PAutomaton(
        states={**first.states, **second.states},
        edges={**first.edges, **second.edges},
        bot=first.bot | second.bot,
        top=first.top | second.top,
    )


def _is_bad_starter(automaton: PAutomaton, edge: Transition) -> bool:
    return is_proper_starter(edge.label) and edge.target not in automaton.top


def _is_bad_terminator(automaton: PAutomaton, edge: Transition) -> bool:
    return is_proper_terminator(edge.label) and edge.source not in automaton.bot


def _require_ab(automaton: PAutomaton) -> None:
    conditions = classify_automaton(automaton).conditions
    if not conditions["a"] or not conditions["b"]:
        raise PreconditionViolated("automaton has transitions into initial or out of accepting states")


def _fresh(name: str, taken: set[str]) -> str:
    while name in taken:
        name += "'"
    taken.add(name)
    return name


def _check_typing(automaton: PAutomaton) -> None:
    for state_id, state in automaton.states.items():
        if state.id != state_id:
            raise InvalidAutomaton(f"state registered as {state_id!r} carries id {state.id!r}")
    for edge_id, edge in automaton.edges.items():
        if edge.id != edge_id:
            raise InvalidAutomaton(f"transition registered as {edge_id!r} carries id {edge.id!r}")
        for endpoint in (edge.source, edge.target):
            if endpoint not in automaton.states:
                raise UnknownCell(f"transition {edge_id!r} refers to unknown state {endpoint!r}")
        if automaton.states[edge.source].mu != edge.label.source_conclist():
            raise InvalidAutomaton(
                f"transition {edge_id!r}: source interface {list(edge.label.source_conclist())} "
                f"does not match state {edge.source!r} of type {list(automaton.states[edge.source].mu)}"
            )
        if automaton.states[edge.target].mu != edge.label.target_conclist():
            raise InvalidAutomaton(
                f"transition {edge_id!r}: target interface {list(edge.label.target_conclist())} "
                f"does not match state {edge.target!r} of type {list(automaton.states[edge.target].mu)}"
            )
    for name, chosen in (("initial", automaton.bot), ("accepting", automaton.top)):
        unknown = sorted(chosen - automaton.states.keys())
        if unknown:
            raise UnknownCell(f"{name} states {unknown} do not exist")


__all__ = [
    "AutomatonClass",
    "AutomatonViolation",
    "BadTransitionCounts",
    "PAutomaton",
    "REDUCED_CONDITIONS",
    "State",
    "Transition",
    "bad_transition_counts",
    "classify_automaton",
    "disjoint_sum",
    "eliminate_bad_starter",
    "eliminate_bad_terminator",
    "eliminate_bad_transitions",
    "is_proper_starter",
    "is_proper_terminator",
    "is_st_label",
    "p_to_st",
    "prefixed",
    "reduce",
    "reduce_ab",
    "relabeled",
    "remove_silent",
    "renumbered",
    "reverse_automaton",
    "rhda_image_violations",
    "split_endpoints",
]
