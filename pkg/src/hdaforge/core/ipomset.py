"""Interval ipomsets, discrete steps and their algebra.

Events are identified positionally (0-based internally). Everything that compares
ipomsets across structures goes through :class:`CanonicalForm`, the normalized sparse
step decomposition, which is identical for isomorphic ipomsets.
"""

from __future__ import annotations

import itertools
import logging
from collections.abc import Iterable, Iterator, Sequence
from dataclasses import dataclass
from enum import StrEnum

import networkx as nx

from hdaforge.core.exceptions import (
    BoundExceeded,
    InterfaceMismatch,
    InvalidIpomset,
    NotInterval,
)

_LOGGER = logging.getLogger(__name__)

Conclist = tuple[str, ...]
IndexSet = frozenset[int]
Pair = tuple[int, int]

ORACLE_EVENT_LIMIT = 5


class StepKind(StrEnum):
    """Kind of a discrete step; identities are starters (or terminators) with nothing active."""

    STARTER = "S"
    TERMINATOR = "T"


@dataclass(frozen=True, slots=True)
class Iconclist:
    """A conclist with source and target interfaces, written ⟨S, U, T⟩."""

    base: Conclist
    source: IndexSet
    target: IndexSet

    def __post_init__(self) -> None:
        _check_indices(self.source | self.target, len(self.base), what="iconclist interface")

    @property
    def is_identity(self) -> bool:
        full = frozenset(range(len(self.base)))
        return self.source == full and self.target == full

    @property
    def is_starter(self) -> bool:
        return self.target == frozenset(range(len(self.base)))

    @property
    def is_terminator(self) -> bool:
        return self.source == frozenset(range(len(self.base)))

    def to_ipomset(self) -> Ipomset:
        return discrete(self.base, self.source, self.target)


@dataclass(frozen=True, slots=True)
class Ipomset:
    """Finite interval ipomset with labels, precedence, event order and interfaces."""

    labels: tuple[str, ...]
    prec: frozenset[Pair] = frozenset()
    evord: frozenset[Pair] = frozenset()
    source: IndexSet = frozenset()
    target: IndexSet = frozenset()

    def __post_init__(self) -> None:
        _check_structure(self)

    @property
    def size(self) -> int:
        return len(self.labels)

    @property
    def events(self) -> range:
        return range(len(self.labels))

    @property
    def is_discrete(self) -> bool:
        return not self.prec

    @property
    def is_identity(self) -> bool:
        full = frozenset(self.events)
        return self.is_discrete and self.source == full and self.target == full

    @property
    def is_starter(self) -> bool:
        return self.is_discrete and self.target == frozenset(self.events)

    @property
    def is_terminator(self) -> bool:
        return self.is_discrete and self.source == frozenset(self.events)

    def predecessors(self, event: int) -> frozenset[int]:
        return frozenset(x for (x, y) in self.prec if y == event)

    def concurrent(self, x: int, y: int) -> bool:
        return x != y and (x, y) not in self.prec and (y, x) not in self.prec

    def order_events(self, events: Iterable[int]) -> tuple[int, ...]:
        """Sort pairwise concurrent events bottom-to-top along the event order."""

        chosen = tuple(events)
        return tuple(
            sorted(chosen, key=lambda x: sum(1 for y in chosen if (y, x) in self.evord)),
        )

    def source_conclist(self) -> Conclist:
        return tuple(self.labels[x] for x in self.order_events(self.source))

    def target_conclist(self) -> Conclist:
        return tuple(self.labels[x] for x in self.order_events(self.target))

    def as_iconclist(self) -> Iconclist:
        """View a discrete ipomset as ⟨S, U, T⟩ over its event-ordered conclist."""

        if not self.is_discrete:
            raise InvalidIpomset("only discrete ipomsets are iconclists")
        order = self.order_events(self.events)
        position = {event: index for index, event in enumerate(order)}
        return Iconclist(
            base=tuple(self.labels[x] for x in order),
            source=frozenset(position[x] for x in self.source),
            target=frozenset(position[x] for x in self.target),
        )

    def reversed(self) -> Ipomset:
        """Swap the interfaces and reverse precedence; the event order is kept."""

        return Ipomset(
            labels=self.labels,
            prec=frozenset((y, x) for (x, y) in self.prec),
            evord=self.evord,
            source=self.target,
            target=self.source,
        )

    def permuted(self, order: Sequence[int]) -> Ipomset:
        """Return the isomorphic copy whose event ``i`` is this ipomset's ``order[i]``."""

        if sorted(order) != list(self.events):
            raise InvalidIpomset("permutation must list every event exactly once")
        new_index = {old: new for new, old in enumerate(order)}
        return Ipomset(
            labels=tuple(self.labels[old] for old in order),
            prec=frozenset((new_index[x], new_index[y]) for (x, y) in self.prec),
            evord=frozenset((new_index[x], new_index[y]) for (x, y) in self.evord),
            source=frozenset(new_index[x] for x in self.source),
            target=frozenset(new_index[x] for x in self.target),
        )

    def width(self) -> int:
        """Size of the largest set of pairwise concurrent events."""

        return max((len(step.base) for step in sparse_decompose(self).steps), default=0)


@dataclass(frozen=True, slots=True)
class DiscreteStep:
    """A starter ⟨U∖A, U, U⟩ or a terminator ⟨U, U, U∖A⟩ over the conclist ``base``."""

    kind: StepKind
    base: Conclist
    active: IndexSet = frozenset()

    def __post_init__(self) -> None:
        _check_indices(self.active, len(self.base), what="step index set")

    @property
    def is_identity(self) -> bool:
        return not self.active

    @property
    def is_proper(self) -> bool:
        return bool(self.active)

    @property
    def rest(self) -> IndexSet:
        return frozenset(range(len(self.base))) - self.active

    def source_conclist(self) -> Conclist:
        if self.kind is StepKind.STARTER:
            return _restrict(self.base, self.rest)
        return self.base

    def target_conclist(self) -> Conclist:
        if self.kind is StepKind.TERMINATOR:
            return _restrict(self.base, self.rest)
        return self.base

    def to_iconclist(self) -> Iconclist:
        full = frozenset(range(len(self.base)))
        if self.kind is StepKind.STARTER:
            return Iconclist(self.base, self.rest, full)
        return Iconclist(self.base, full, self.rest)

    def to_ipomset(self) -> Ipomset:
        return self.to_iconclist().to_ipomset()

    def encoding(self) -> tuple[str, Conclist, tuple[int, ...]]:
        if self.is_identity:
            return ("I", self.base, ())
        return (self.kind.value, self.base, tuple(sorted(self.active)))


@dataclass(frozen=True, slots=True)
class StepSequence:
    """A composable list of discrete steps."""

    steps: tuple[DiscreteStep, ...] = ()

    def __iter__(self) -> Iterator[DiscreteStep]:
        return iter(self.steps)

    def __len__(self) -> int:
        return len(self.steps)

    @property
    def is_sparse(self) -> bool:
        if len(self.steps) == 1 and self.steps[0].is_identity:
            return True
        if any(step.is_identity for step in self.steps):
            return False
        return all(a.kind is not b.kind for a, b in itertools.pairwise(self.steps))

    def encoding(self) -> tuple[tuple[str, Conclist, tuple[int, ...]], ...]:
        return tuple(step.encoding() for step in self.steps)


@dataclass(frozen=True, slots=True, order=True)
class CanonicalForm:
    """Isomorphism-invariant token: the normalized sparse decomposition.

    Ordering is by number of proper factors first, then lexicographic on the factors.
    """

    length: int
    factors: tuple[tuple[str, Conclist, tuple[int, ...]], ...]

    def steps(self) -> StepSequence:
        steps: list[DiscreteStep] = []
        for kind, base, active in self.factors:
            step_kind = StepKind.TERMINATOR if kind == StepKind.TERMINATOR.value else StepKind.STARTER
            steps.append(DiscreteStep(step_kind, base, frozenset(active)))
        return StepSequence(tuple(steps))

    def to_ipomset(self) -> Ipomset:
        """The canonical representative; isomorphic inputs give identical objects."""

        return compose(self.steps())

    @property
    def event_count(self) -> int:
        return self.to_ipomset().size


@dataclass(frozen=True, slots=True)
class SubsumptionResult:
    holds: bool
    witness: tuple[int, ...] | None = None

    def __bool__(self) -> bool:
        return self.holds


def identity(base: Sequence[str]) -> Ipomset:
    full = frozenset(range(len(base)))
    return discrete(base, full, full)


def starter(base: Sequence[str], started: Iterable[int]) -> Ipomset:
    return DiscreteStep(StepKind.STARTER, tuple(base), frozenset(started)).to_ipomset()


def terminator(base: Sequence[str], terminated: Iterable[int]) -> Ipomset:
    return DiscreteStep(StepKind.TERMINATOR, tuple(base), frozenset(terminated)).to_ipomset()


def discrete(base: Sequence[str], source: Iterable[int], target: Iterable[int]) -> Ipomset:
    """The discrete ipomset ⟨S, U, T⟩ whose event order follows the conclist positions."""

    size = len(base)
    return Ipomset(
        labels=tuple(base),
        evord=frozenset((i, j) for i in range(size) for j in range(i + 1, size)),
        source=frozenset(source),
        target=frozenset(target),
    )


def glue(left: Ipomset, right: Ipomset) -> Ipomset:
    """Glue ``right`` after ``left``, identifying T of ``left`` with S of ``right``."""

    outgoing = left.order_events(left.target)
    incoming = right.order_events(right.source)
    out_labels = tuple(left.labels[x] for x in outgoing)
    in_labels = tuple(right.labels[x] for x in incoming)
    if out_labels != in_labels:
        raise InterfaceMismatch(f"{list(out_labels)} cannot be glued to {list(in_labels)}")

    mapping = dict(zip(incoming, outgoing, strict=True))
    fresh = [y for y in right.events if y not in right.source]
    for offset, event in enumerate(fresh):
        mapping[event] = left.size + offset

    finished = [x for x in left.events if x not in left.target]
    prec = set(left.prec)
    prec.update((mapping[x], mapping[y]) for (x, y) in right.prec)
    prec.update((x, mapping[y]) for x in finished for y in fresh)
    evord = set(left.evord)
    evord.update((mapping[x], mapping[y]) for (x, y) in right.evord)

    return Ipomset(
        labels=left.labels + tuple(right.labels[y] for y in fresh),
        prec=frozenset(prec),
        evord=frozenset(evord),
        source=left.source,
        target=frozenset(mapping[y] for y in right.target),
    )


def compose(sequence: StepSequence | Sequence[DiscreteStep], base: Sequence[str] | None = None) -> Ipomset:
    """Left fold of :func:`glue`; the empty sequence needs ``base`` and yields its identity."""

    steps = tuple(sequence)
    if not steps:
        if base is None:
            raise InterfaceMismatch("an empty step sequence needs a declared conclist")
        return identity(base)

    result = steps[0].to_ipomset()
    for position, step in enumerate(steps[1:], start=1):
        try:
            result = glue(result, step.to_ipomset())
        except InterfaceMismatch as exc:
            raise InterfaceMismatch(exc.detail, position=position) from exc
    return result


def sparse_decompose(ipomset: Ipomset) -> StepSequence:
    """Compute the unique alternating decomposition into proper starters and terminators.

    Events are started as soon as all their predecessors have ended and ended only when
    the unstarted event with the smallest predecessor set needs them gone. Predecessor sets
    of an interval order form a chain, so that smallest set is below every other one.
    """

    everything = frozenset(ipomset.events)
    preds = {event: ipomset.predecessors(event) for event in ipomset.events}
    running: set[int] = set(ipomset.source)
    terminated: set[int] = set()
    unstarted: set[int] = set(everything - ipomset.source)
    steps: list[DiscreteStep] = []

    while unstarted:
        ready = {y for y in unstarted if preds[y] <= terminated}
        if ready:
            steps.append(_step(ipomset, StepKind.STARTER, running | ready, ready))
            running |= ready
            unstarted -= ready
            continue
        needed = min((preds[y] for y in unstarted), key=len)
        ending = set(needed) - terminated
        if not ending <= running:
            raise NotInterval("predecessor sets do not form a chain")
        steps.append(_step(ipomset, StepKind.TERMINATOR, running, ending))
        running -= ending
        terminated |= ending

    leftover = running - set(ipomset.target)
    if leftover:
        steps.append(_step(ipomset, StepKind.TERMINATOR, running, leftover))

    if not steps:
        # identity ipomset
        base = tuple(ipomset.labels[x] for x in ipomset.order_events(everything))
        steps.append(DiscreteStep(StepKind.STARTER, base, frozenset()))
    return StepSequence(tuple(steps))


def canon(ipomset: Ipomset) -> CanonicalForm:
    sequence = sparse_decompose(ipomset)
    length = 0 if sequence.steps[0].is_identity else len(sequence)
    return CanonicalForm(length=length, factors=sequence.encoding())


def isomorphic(left: Ipomset, right: Ipomset) -> bool:
    return canon(left) == canon(right)


def sparse_length(ipomset: Ipomset) -> int:
    return canon(ipomset).length


def subsumes(finer: Ipomset, coarser: Ipomset) -> SubsumptionResult:
    """Decide ``finer ⊑ coarser``: ``finer`` has at least the precedences of ``coarser``."""

    if finer.size != coarser.size or sorted(finer.labels) != sorted(coarser.labels):
        return SubsumptionResult(False)

    def compatible(x: int, y: int) -> bool:
        return (
            finer.labels[x] == coarser.labels[y]
            and (x in finer.source) == (y in coarser.source)
            and (x in finer.target) == (y in coarser.target)
        )

    candidates = {x: [y for y in coarser.events if compatible(x, y)] for x in finer.events}
    assignment: dict[int, int] = {}
    used: set[int] = set()

    def consistent(x: int, y: int) -> bool:
        for x1, y1 in assignment.items():
            if (y1, y) in coarser.prec and (x1, x) not in finer.prec:
                return False
            if (y, y1) in coarser.prec and (x, x1) not in finer.prec:
                return False
            if (x1, x) in finer.evord and (y1, y) not in coarser.evord:
                return False
            if (x, x1) in finer.evord and (y, y1) not in coarser.evord:
                return False
        return True

    def search(position: int) -> bool:
        if position == finer.size:
            return True
        for y in candidates[position]:
            if y in used or not consistent(position, y):
                continue
            assignment[position] = y
            used.add(y)
            if search(position + 1):
                return True
            del assignment[position]
            used.discard(y)
        return False

    if search(0):
        return SubsumptionResult(True, tuple(assignment[x] for x in finer.events))
    return SubsumptionResult(False)


def down_closure(language: Iterable[Ipomset]) -> frozenset[CanonicalForm]:
    """All ipomsets subsumed by some member, as canonical forms."""

    closure: set[CanonicalForm] = set()
    for coarse in language:
        closure.update(canon(refined) for refined in _refinements(coarse))
    return frozenset(closure)


def oracle_decompose(ipomset: Ipomset, bound: int = ORACLE_EVENT_LIMIT) -> frozenset[StepSequence]:
    """Exhaustively find every sparse step sequence composing to ``ipomset``.

    The search walks every sequence of running-event sets over the ipomset's own events and
    compares compositions with a brute-force isomorphism test, so it shares no logic with
    :func:`sparse_decompose`.
    """

    if ipomset.size > bound:
        raise BoundExceeded(f"oracle limited to {bound} events, got {ipomset.size}")

    everything = frozenset(ipomset.events)
    found: set[StepSequence] = set()

    def running_conclist(running: frozenset[int]) -> tuple[int, ...] | None:
        if any(not ipomset.concurrent(x, y) for x, y in itertools.combinations(running, 2)):
            return None
        return ipomset.order_events(running)

    def record(steps: list[DiscreteStep]) -> None:
        if not steps:
            base = tuple(ipomset.labels[x] for x in ipomset.order_events(everything))
            steps = [DiscreteStep(StepKind.STARTER, base, frozenset())]
        if _brute_isomorphic(compose(steps), ipomset):
            found.add(StepSequence(tuple(steps)))

    def search(
        running: frozenset[int],
        started: frozenset[int],
        steps: list[DiscreteStep],
        last: StepKind | None,
    ) -> None:
        if started == everything and running == ipomset.target:
            record(steps)
        if last is not StepKind.STARTER:
            for fresh in _nonempty_subsets(everything - started):
                widened = running | fresh
                order = running_conclist(widened)
                if order is None:
                    continue
                step = _ordered_step(ipomset, StepKind.STARTER, order, fresh)
                search(widened, started | fresh, [*steps, step], StepKind.STARTER)
        if last is not StepKind.TERMINATOR:
            order = running_conclist(running)
            if order is None:
                return
            for ending in _nonempty_subsets(running):
                step = _ordered_step(ipomset, StepKind.TERMINATOR, order, ending)
                search(running - ending, started, [*steps, step], StepKind.TERMINATOR)

    search(ipomset.source, ipomset.source, [], None)
    _LOGGER.debug("oracle found %d sparse decompositions for %d events", len(found), ipomset.size)
    return frozenset(found)


def enumerate_interval_ipomsets(max_events: int, alphabet: Sequence[str]) -> list[Ipomset]:
    """Every interval ipomset with at most ``max_events`` events, one per isomorphism class."""

    seen: dict[CanonicalForm, Ipomset] = {}
    for size in range(max_events + 1):
        pairs = [(x, y) for x in range(size) for y in range(size) if x != y]
        orders = [
            frozenset(chosen)
            for chosen in _subsets(pairs)
            if _is_strict_order(chosen) and _is_interval(chosen)
        ]
        for labels in itertools.product(alphabet, repeat=size):
            for prec in orders:
                evord = frozenset(
                    (x, y)
                    for x in range(size)
                    for y in range(x + 1, size)
                    if (x, y) not in prec and (y, x) not in prec
                )
                minimal = [x for x in range(size) if not any((z, x) in prec for z in range(size))]
                maximal = [x for x in range(size) if not any((x, z) in prec for z in range(size))]
                for source in _subsets(minimal):
                    for target in _subsets(maximal):
                        candidate = Ipomset(
                            labels=labels,
                            prec=prec,
                            evord=evord,
                            source=frozenset(source),
                            target=frozenset(target),
                        )
                        seen.setdefault(canon(candidate), candidate)
    return [seen[key] for key in sorted(seen)]


def _refinements(coarse: Ipomset) -> Iterator[Ipomset]:
    loose = [(x, y) for (x, y) in sorted(coarse.evord)]
    for choice in itertools.product(("keep", "forward", "backward"), repeat=len(loose)):
        prec = set(coarse.prec)
        evord = set()
        for (x, y), decision in zip(loose, choice, strict=True):
            if decision == "keep":
                evord.add((x, y))
            elif decision == "forward":
                prec.add((x, y))
            else:
                prec.add((y, x))
        try:
            yield Ipomset(
                labels=coarse.labels,
                prec=frozenset(prec),
                evord=frozenset(evord),
                source=coarse.source,
                target=coarse.target,
            )
        except InvalidIpomset:
            continue


def _brute_isomorphic(left: Ipomset, right: Ipomset) -> bool:
    if left.size != right.size or sorted(left.labels) != sorted(right.labels):
        return False
    for image in itertools.permutations(right.events):
        if any(left.labels[x] != right.labels[image[x]] for x in left.events):
            continue
        if frozenset(image[x] for x in left.source) != right.source:
            continue
        if frozenset(image[x] for x in left.target) != right.target:
            continue
        if frozenset((image[x], image[y]) for (x, y) in left.prec) != right.prec:
            continue
        if frozenset((image[x], image[y]) for (x, y) in left.evord) != right.evord:
            continue
        return True
    return False


def _step(ipomset: Ipomset, kind: StepKind, running: set[int], active: set[int]) -> DiscreteStep:
    return _ordered_step(ipomset, kind, ipomset.order_events(running), active)


def _ordered_step(
    ipomset: Ipomset,
    kind: StepKind,
    order: Sequence[int],
    active: Iterable[int],
) -> DiscreteStep:
    chosen = set(active)
    return DiscreteStep(
        kind=kind,
        base=tuple(ipomset.labels[x] for x in order),
        active=frozenset(index for index, event in enumerate(order) if event in chosen),
    )


def _restrict(base: Conclist, keep: Iterable[int]) -> Conclist:
    kept = set(keep)
    return tuple(label for index, label in enumerate(base) if index in kept)


def _subsets(items: Sequence) -> Iterator[tuple]:
    for size in range(len(items) + 1):
        yield from itertools.combinations(items, size)


def _nonempty_subsets(items: Iterable[int]) -> Iterator[frozenset[int]]:
    pool = sorted(items)
    for size in range(1, len(pool) + 1):
        for chosen in itertools.combinations(pool, size):
            yield frozenset(chosen)


def _is_strict_order(pairs: Iterable[Pair]) -> bool:
    relation = set(pairs)
    if any((y, x) in relation for (x, y) in relation):
        return False
    return all(
        (x, w) in relation for (x, y) in relation for (z, w) in relation if y == z
    )


def _is_interval(pairs: Iterable[Pair]) -> bool:
    relation = set(pairs)
    return all(
        (x, w) in relation or (z, y) in relation
        for (x, y), (z, w) in itertools.combinations(relation, 2)
    )


def _check_indices(indices: Iterable[int], size: int, *, what: str) -> None:
    for index in indices:
        if not 0 <= index < size:
            raise InvalidIpomset(f"{what} index {index} outside 0..{size - 1}")


def _check_structure(ipomset: Ipomset) -> None:
    size = ipomset.size
    _check_indices(ipomset.source | ipomset.target, size, what="interface")
    for x, y in itertools.chain(ipomset.prec, ipomset.evord):
        _check_indices((x, y), size, what="relation")
        if x == y:
            raise InvalidIpomset(f"relation is not irreflexive at event {x}")

    prec = ipomset.prec
    for (x, y), (z, w) in itertools.product(prec, prec):
        if y == z and (x, w) not in prec:
            raise InvalidIpomset(f"precedence is not transitive: {x}<{y}<{w}")

    if ipomset.evord and not nx.is_directed_acyclic_graph(nx.DiGraph(list(ipomset.evord))):
        raise InvalidIpomset("event order has a cycle")

    for x, y in itertools.combinations(range(size), 2):
        related = ((x, y) in prec) + ((y, x) in prec) + ((x, y) in ipomset.evord) + (
            (y, x) in ipomset.evord
        )
        if related != 1:
            raise InvalidIpomset(f"events {x} and {y} must be related by exactly one order")

    for x in ipomset.source:
        if any((z, x) in prec for z in range(size)):
            raise InvalidIpomset(f"source event {x} is not minimal")
    for x in ipomset.target:
        if any((x, z) in prec for z in range(size)):
            raise InvalidIpomset(f"target event {x} is not maximal")

    for (x, y), (z, w) in itertools.combinations(prec, 2):
        if (x, w) not in prec and (z, y) not in prec:
            raise NotInterval(f"2+2 pattern {x}<{y}, {z}<{w}")


__all__ = [
    "CanonicalForm",
    "Conclist",
    "DiscreteStep",
    "Iconclist",
    "IndexSet",
    "Ipomset",
    "ORACLE_EVENT_LIMIT",
    "StepKind",
    "StepSequence",
    "SubsumptionResult",
    "canon",
    "compose",
    "discrete",
    "down_closure",
    "enumerate_interval_ipomsets",
    "glue",
    "identity",
    "isomorphic",
    "oracle_decompose",
    "sparse_decompose",
    "sparse_length",
    "starter",
    "subsumes",
    "terminator",
]
