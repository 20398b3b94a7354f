from __future__ import annotations

from hdaforge.core.dot import complex_graph, to_dot
from hdaforge.core.translate import cone_of_gsta, st_of


def lines(text: str) -> set[str]:
    return {line.strip() for line in text.splitlines()}


def test_single_edge_becomes_one_arrow(complex_fixture) -> None:
    text = to_dot(complex_fixture("single_edge"))

    assert text.startswith("digraph {\n")
    assert text.endswith("}\n")
    assert {
        "rankdir=LR",
        "n1 [label=v0 penwidth=2 shape=circle]",
        "n2 [label=v1 shape=doublecircle]",
        'n1 -> n2 [label="a e0"]',
    } <= lines(text)


def test_squares_become_clusters_around_their_corners(complex_fixture) -> None:
    graph = complex_graph(complex_fixture("square"))
    text = graph.source

    assert "subgraph cluster_0 {" in lines(text)
    assert 'color=grey60 fillcolor=grey90 label="x a b" style=filled' in lines(text)
    assert {"n4", "n5", "n6", "n7"} <= lines(text)
    assert text.count("->") == 4


def test_missing_faces_leave_loose_dashed_edges(complex_fixture) -> None:
    text = to_dot(complex_fixture("sparse_square"))

    assert 'loose0 [label="" shape=point]' in lines(text)
    assert 'loose0 -> n5 [label="a ea0" style=dashed]' in lines(text)


def test_relational_faces_are_dashed(complex_fixture) -> None:
    text = to_dot(complex_fixture("strict_relational_square"))

    assert 'n4 -> n7 [label="a ea0" style=dashed]' in lines(text)


def test_automaton_states_show_their_types(automaton_fixture) -> None:
    text = to_dot(automaton_fixture("starter_chain"))

    assert {
        'n0 [label="p: ∅" shape=circle]',
        'n2 [label="r: a b" shape=circle]',
        'n1 -> n2 [label="e2: S[a b|2]"]',
    } <= lines(text)


def test_st_automaton_dot_lists_every_step(complex_fixture) -> None:
    text = to_dot(st_of(complex_fixture("single_edge")))

    assert 'n1 -> n0 [label="v0>e0/S1: S[a|1]"]' in lines(text)
    assert 'n0 -> n2 [label="e0>v1/T1: T[a|1]"]' in lines(text)


def test_ids_with_colons_stay_labels(automaton_fixture) -> None:
    text = to_dot(cone_of_gsta(automaton_fixture("cone_transition")))

    assert '"z:p"' in text
    assert "z:p ->" not in text
    assert all(line.split(" [")[0].count(":") == 0 for line in lines(text) if "->" in line)
