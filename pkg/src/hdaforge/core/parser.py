"""Text formats: ipomset literals, step atoms and rational expressions.

Ipomset literal::

    {.a b c d. | 1<3, 1<4, 2<4}

lists the events bottom-to-top along the event order, ``.`` before a label marks a source
interface event and ``.`` after it a target interface event; precedence pairs are 1-based
and closed transitively on parse. Query shorthand (anything not starting with ``{``) builds
interface-free ipomsets from single events with ``;`` (sequence) and ``||`` (parallel,
binding tighter).

Expression grammar::

    expr   := term ('+' term)*
    term   := factor (';' factor)*
    factor := atom ['^+'] | '(' expr ')' ['^+']
    atom   := '0' | 'S[' labels '|' idxset ']' | 'T[' labels '|' idxset ']' | 'I[' labels ']'
"""

from __future__ import annotations

import logging
import re
from collections.abc import Callable, Sequence

import networkx as nx

from hdaforge.core.exceptions import ExpressionSyntaxError
from hdaforge.core.ipomset import (
    CanonicalForm,
    DiscreteStep,
    Ipomset,
    StepKind,
    canon,
    glue,
)
from hdaforge.core.kleene import (
    ConcatExpr,
    EmptyExpr,
    IdentityAtom,
    PlusExpr,
    RationalExpr,
    StarterAtom,
    TerminatorAtom,
    UnionExpr,
)

_LOGGER = logging.getLogger(__name__)

_LABEL_PATTERN = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")
_INT_PATTERN = re.compile(r"[0-9]+")


class _Cursor:
    """Whitespace-skipping scanner over a single line of text."""

    def __init__(self, text: str) -> None:
        self.text = text
        self.position = 0

    def skip(self) -> None:
        while self.position < len(self.text) and self.text[self.position].isspace():
            self.position += 1

    def at_end(self) -> bool:
        self.skip()
        return self.position >= len(self.text)

    def peek(self, token: str) -> bool:
        self.skip()
        return self.text.startswith(token, self.position)

    def accept(self, token: str) -> bool:
        if self.peek(token):
            self.position += len(token)
            return True
        return False

    def expect(self, token: str) -> None:
        if not self.accept(token):
            self.fail(f"expected {token!r}")

    def match(self, pattern: re.Pattern[str], what: str) -> str:
        self.skip()
        found = pattern.match(self.text, self.position)
        if found is None:
            self.fail(f"expected {what}")
        self.position = found.end()
        return found.group(0)

    def fail(self, message: str) -> None:
        raise ExpressionSyntaxError(message, text=self.text, position=self.position)


def parse_ipomset(text: str) -> Ipomset:
    """Parse an explicit literal (``{...}``) or a query shorthand such as ``a||b;c``."""

    cursor = _Cursor(text)
    if cursor.peek("{"):
        result = _parse_literal(cursor)
    else:
        result = _parse_sequence(cursor)
    if not cursor.at_end():
        cursor.fail("unexpected trailing text")
    return result


def format_ipomset(ipomset: Ipomset | CanonicalForm) -> str:
    """Render the canonical literal; isomorphic ipomsets render identically."""

    form = ipomset if isinstance(ipomset, CanonicalForm) else canon(ipomset)
    representative = form.to_ipomset()
    order = list(
        nx.lexicographical_topological_sort(
            _evord_graph(representative),
        ),
    )
    position = {event: index for index, event in enumerate(order)}

    events = []
    for event in order:
        text = representative.labels[event]
        if event in representative.source:
            text = "." + text
        if event in representative.target:
            text = text + "."
        events.append(text)
    pairs = sorted((position[x] + 1, position[y] + 1) for (x, y) in representative.prec)

    body = " ".join(events)
    if pairs:
        body += " | " + ", ".join(f"{x}<{y}" for x, y in pairs)
    return "{" + body + "}"


def parse_step(text: str) -> DiscreteStep:
    """Parse a single ``S[..|..]``, ``T[..|..]`` or ``I[..]`` atom."""

    cursor = _Cursor(text)
    atom = _parse_atom(cursor)
    if not cursor.at_end():
        cursor.fail("unexpected trailing text")
    if isinstance(atom, EmptyExpr):
        cursor.fail("the empty language is not a step")
    return _atom_step(atom)


def parse_label(text: str) -> Ipomset:
    """Parse an automaton transition label: a step atom or an ipomset literal."""

    stripped = text.strip()
    if stripped[:2] in {"S[", "T[", "I["}:
        return parse_step(stripped).to_ipomset()
    return parse_ipomset(stripped)


def format_label(label: Ipomset) -> str:
    """Render a transition label, preferring the step-atom syntax for starters/terminators."""

    if label.is_discrete:
        view = label.as_iconclist()
        full = frozenset(range(len(view.base)))
        if view.is_identity:
            return format_expr(IdentityAtom(view.base))
        if view.is_starter:
            return format_expr(StarterAtom(view.base, full - view.source))
        if view.is_terminator:
            return format_expr(TerminatorAtom(view.base, full - view.target))
    return format_ipomset(label)


def parse_expr(text: str) -> RationalExpr:
    cursor = _Cursor(text)
    expr = _parse_union(cursor)
    if not cursor.at_end():
        cursor.fail("unexpected trailing text")
    _LOGGER.debug("Parsed expression %r", text)
    return expr


def format_expr(expr: RationalExpr) -> str:
    return _format(expr, 0)


def _parse_literal(cursor: _Cursor) -> Ipomset:
    cursor.expect("{")
    labels: list[str] = []
    source: set[int] = set()
    target: set[int] = set()
    while not cursor.peek("|") and not cursor.peek("}"):
        index = len(labels)
        if cursor.accept("."):
            source.add(index)
        labels.append(cursor.match(_LABEL_PATTERN, "event label"))
        if cursor.text.startswith(".", cursor.position):
            cursor.position += 1
            target.add(index)

    graph = nx.DiGraph()
    graph.add_nodes_from(range(len(labels)))
    if cursor.accept("|"):
        while True:
            first = int(cursor.match(_INT_PATTERN, "event number")) - 1
            cursor.expect("<")
            second = int(cursor.match(_INT_PATTERN, "event number")) - 1
            if not (0 <= first < len(labels) and 0 <= second < len(labels)):
                cursor.fail("precedence refers to an unknown event")
            graph.add_edge(first, second)
            if not cursor.accept(","):
                break
    cursor.expect("}")

    closure = nx.transitive_closure(graph, reflexive=False)
    prec = frozenset(closure.edges())
    size = len(labels)
    evord = frozenset(
        (x, y)
        for x in range(size)
        for y in range(x + 1, size)
        if (x, y) not in prec and (y, x) not in prec
    )
    return Ipomset(
        labels=tuple(labels),
        prec=prec,
        evord=evord,
        source=frozenset(source),
        target=frozenset(target),
    )


def _parse_sequence(cursor: _Cursor) -> Ipomset:
    result = _parse_parallel(cursor)
    while cursor.accept(";"):
        result = glue(result, _parse_parallel(cursor))
    return result


def _parse_parallel(cursor: _Cursor) -> Ipomset:
    result = _parse_event(cursor)
    while cursor.accept("||"):
        result = _parallel(result, _parse_event(cursor))
    return result


def _parse_event(cursor: _Cursor) -> Ipomset:
    if cursor.accept("("):
        inner = _parse_sequence(cursor)
        cursor.expect(")")
        return inner
    return Ipomset(labels=(cursor.match(_LABEL_PATTERN, "event label"),))


def _parallel(lower: Ipomset, upper: Ipomset) -> Ipomset:
    shift = lower.size
    return Ipomset(
        labels=lower.labels + upper.labels,
        prec=lower.prec | frozenset((x + shift, y + shift) for (x, y) in upper.prec),
        evord=lower.evord
        | frozenset((x + shift, y + shift) for (x, y) in upper.evord)
        | frozenset((x, y + shift) for x in lower.events for y in upper.events),
        source=lower.source | frozenset(x + shift for x in upper.source),
        target=lower.target | frozenset(x + shift for x in upper.target),
    )


def _parse_union(cursor: _Cursor) -> RationalExpr:
    items = [_parse_concat(cursor)]
    while cursor.accept("+"):
        items.append(_parse_concat(cursor))
    if len(items) == 1:
        return items[0]
    return UnionExpr(tuple(_flatten(items, UnionExpr)))


def _parse_concat(cursor: _Cursor) -> RationalExpr:
    items = [_parse_factor(cursor)]
    while cursor.accept(";"):
        items.append(_parse_factor(cursor))
    if len(items) == 1:
        return items[0]
    return ConcatExpr(tuple(_flatten(items, ConcatExpr)))


def _parse_factor(cursor: _Cursor) -> RationalExpr:
    if cursor.accept("("):
        inner = _parse_union(cursor)
        cursor.expect(")")
    else:
        inner = _parse_atom(cursor)
    while cursor.accept("^+"):
        inner = PlusExpr(inner)
    return inner


def _parse_atom(cursor: _Cursor) -> RationalExpr:
    if cursor.accept("0"):
        return EmptyExpr()
    for prefix, build in _ATOM_BUILDERS:
        if cursor.accept(prefix):
            labels = _parse_labels(cursor)
            indices: frozenset[int] = frozenset()
            if prefix != "I[":
                cursor.expect("|")
                indices = _parse_indices(cursor, len(labels))
            cursor.expect("]")
            return build(labels, indices)
    cursor.fail("expected an atom")
    raise AssertionError("unreachable")


def _parse_labels(cursor: _Cursor) -> tuple[str, ...]:
    labels: list[str] = []
    while True:
        cursor.skip()
        if _LABEL_PATTERN.match(cursor.text, cursor.position) is None:
            return tuple(labels)
        labels.append(cursor.match(_LABEL_PATTERN, "label"))


def _parse_indices(cursor: _Cursor, size: int) -> frozenset[int]:
    if cursor.peek("]"):
        return frozenset()
    indices: set[int] = set()
    while True:
        value = int(cursor.match(_INT_PATTERN, "index"))
        if not 1 <= value <= size:
            cursor.fail(f"index {value} outside 1..{size}")
        indices.add(value - 1)
        if not cursor.accept(","):
            return frozenset(indices)


_ATOM_BUILDERS: tuple[tuple[str, Callable[[tuple[str, ...], frozenset[int]], RationalExpr]], ...] = (
    ("S[", lambda labels, indices: StarterAtom(labels, indices)),
    ("T[", lambda labels, indices: TerminatorAtom(labels, indices)),
    ("I[", lambda labels, _indices: IdentityAtom(labels)),
)


def _atom_step(atom: RationalExpr) -> DiscreteStep:
    if isinstance(atom, StarterAtom):
        return DiscreteStep(StepKind.STARTER, atom.base, atom.active)
    if isinstance(atom, TerminatorAtom):
        return DiscreteStep(StepKind.TERMINATOR, atom.base, atom.active)
    if isinstance(atom, IdentityAtom):
        return DiscreteStep(StepKind.STARTER, atom.base, frozenset())
    raise ExpressionSyntaxError("not a step atom", text=repr(atom), position=0)


def _flatten(items: Sequence[RationalExpr], kind: type) -> list[RationalExpr]:
    flat: list[RationalExpr] = []
    for item in items:
        if isinstance(item, kind):
            flat.extend(item.items)
        else:
            flat.append(item)
    return flat


def _format(expr: RationalExpr, context: int) -> str:
    if isinstance(expr, EmptyExpr):
        return "0"
    if isinstance(expr, StarterAtom):
        return f"S[{' '.join(expr.base)}|{_format_indices(expr.active)}]"
    if isinstance(expr, TerminatorAtom):
        return f"T[{' '.join(expr.base)}|{_format_indices(expr.active)}]"
    if isinstance(expr, IdentityAtom):
        return f"I[{' '.join(expr.base)}]"
    if isinstance(expr, PlusExpr):
        inner = _format(expr.inner, 2)
        if isinstance(expr.inner, UnionExpr | ConcatExpr):
            inner = f"({_format(expr.inner, 0)})"
        return f"{inner}^+"
    if isinstance(expr, ConcatExpr):
        text = " ; ".join(_format(item, 2) for item in expr.items)
        return f"({text})" if context > 1 else text
    if isinstance(expr, UnionExpr):
        text = " + ".join(_format(item, 1) for item in expr.items)
        return f"({text})" if context > 0 else text
    raise TypeError(f"unknown expression node {type(expr).__name__}")


def _format_indices(indices: frozenset[int]) -> str:
    return ",".join(str(index + 1) for index in sorted(indices))


def _evord_graph(ipomset: Ipomset) -> nx.DiGraph:
    graph = nx.DiGraph()
    graph.add_nodes_from(ipomset.events)
    graph.add_edges_from(ipomset.evord)
    return graph


__all__ = [
    "format_expr",
    "format_ipomset",
    "format_label",
    "parse_expr",
    "parse_ipomset",
    "parse_label",
    "parse_step",
]
