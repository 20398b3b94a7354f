"""Graphviz export for complexes and automata.

Nodes are named ``n0, n1, ...`` in sorted id order and carry the cell or state id as their
label; Graphviz would read the ``:`` in cone and resolved ids as a port separator.
"""

from __future__ import annotations

import logging

import graphviz

from hdaforge.core.automaton import PAutomaton
from hdaforge.core.complex import Complex
from hdaforge.core.parser import format_label

_LOGGER = logging.getLogger(__name__)

_LOWER = (frozenset({0}), frozenset())
_UPPER = (frozenset(), frozenset({0}))


def _shape(cell_id: str, top: frozenset[str]) -> str:
    return "doublecircle" if cell_id in top else "circle"


def _node_names(ids: list[str]) -> dict[str, str]:
    return {item: f"n{index}" for index, item in enumerate(sorted(ids))}


def complex_graph(complex_: Complex) -> graphviz.Digraph:
    """Vertices become nodes, edges arrows, squares shaded clusters and higher cells records."""

    dot = graphviz.Digraph()
    dot.attr(rankdir="LR")
    names = _node_names(list(complex_.cells))
    by_dimension: dict[int, list[str]] = {}
    for cell_id in sorted(complex_.cells):
        by_dimension.setdefault(complex_.cells[cell_id].dimension, []).append(cell_id)

    for index, square in enumerate(by_dimension.get(2, [])):
        corners: set[str] = set()
        for (lower, upper), targets in complex_.faces.get(square, {}).items():
            if len(lower) + len(upper) == 2:
                corners |= targets
        with dot.subgraph(name=f"cluster_{index}") as cluster:
            cluster.attr(
                style="filled",
                fillcolor="grey90",
                color="grey60",
                label=f"{square} {' '.join(complex_.ev(square))}",
            )
            for corner in sorted(corners):
                cluster.node(names[corner])

    for vertex in by_dimension.get(0, []):
        attributes = {"shape": _shape(vertex, complex_.top)}
        if vertex in complex_.bot:
            attributes["penwidth"] = "2"
        dot.node(names[vertex], label=vertex, **attributes)

    loose = 0
    for edge_id in by_dimension.get(1, []):
        entries = complex_.faces.get(edge_id, {})
        ends: list[str] = []
        for key in (_LOWER, _UPPER):
            targets = sorted(entries.get(key, ()))
            if targets:
                ends.append(names[targets[0]])
            else:
                end = f"loose{loose}"
                loose += 1
                dot.node(end, label="", shape="point")
                ends.append(end)
        attributes = {}
        if len(entries.get(_LOWER, ())) != 1 or len(entries.get(_UPPER, ())) != 1:
            attributes["style"] = "dashed"
        if edge_id in complex_.bot | complex_.top:
            attributes["penwidth"] = "2"
        dot.edge(ends[0], ends[1], label=f"{complex_.ev(edge_id)[0]} {edge_id}", **attributes)

    for dimension in sorted(d for d in by_dimension if d > 2):
        for cell_id in by_dimension[dimension]:
            label = "{" + cell_id + "|" + " ".join(complex_.ev(cell_id)) + "}"
            dot.node(names[cell_id], label=label, shape="record")
    return dot


def automaton_graph(automaton: PAutomaton) -> graphviz.Digraph:
    dot = graphviz.Digraph()
    dot.attr(rankdir="LR")
    names = _node_names(list(automaton.states))
    for state_id in sorted(automaton.states):
        mu = " ".join(automaton.states[state_id].mu) or "∅"
        attributes = {"shape": _shape(state_id, automaton.top)}
        if state_id in automaton.bot:
            attributes["penwidth"] = "2"
        dot.node(names[state_id], label=f"{state_id}: {mu}", **attributes)
    for edge in automaton.sorted_edges():
        dot.edge(
            names[edge.source],
            names[edge.target],
            label=f"{edge.id}: {format_label(edge.label)}",
        )
    return dot


def to_dot(model: Complex | PAutomaton) -> str:
    graph = complex_graph(model) if isinstance(model, Complex) else automaton_graph(model)
    text = graph.source
    _LOGGER.debug("Rendered DOT with %d lines", text.count("\n"))
    return text


__all__ = ["automaton_graph", "complex_graph", "to_dot"]
