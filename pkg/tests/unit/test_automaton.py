from __future__ import annotations

import pytest

from hdaforge.core.automaton import (
    PAutomaton,
    State,
    Transition,
    bad_transition_counts,
    classify_automaton,
    disjoint_sum,
    eliminate_bad_starter,
    eliminate_bad_terminator,
    p_to_st,
    reduce,
    reduce_ab,
    remove_silent,
    renumbered,
    rhda_image_violations,
    split_endpoints,
)
from hdaforge.core.exceptions import (
    InvalidAutomaton,
    NotBadStarter,
    NotBadTerminator,
    PreconditionViolated,
    UnknownCell,
)
from hdaforge.core.language import enumerate_language
from hdaforge.core.parser import parse_ipomset, parse_label


def _automaton(states, edges, bot, top) -> PAutomaton:
    return PAutomaton.build(
        [State(state_id, tuple(mu)) for state_id, mu in states],
        [Transition(edge_id, source, target, parse_label(label)) for edge_id, source, target, label in edges],
        bot=bot,
        top=top,
    )


@pytest.fixture
def single_event() -> PAutomaton:
    return _automaton(
        [("p", ()), ("q", ("a",)), ("r", ())],
        [("e1", "p", "q", "S[a|1]"), ("e2", "q", "r", "T[a|1]")],
        bot=["p"],
        top=["r"],
    )


def _forms(recognizer, bound: int = 6):
    return enumerate_language(recognizer, bound).forms


def test_starter_chain_is_an_st_automaton_but_not_reduced(automaton_fixture) -> None:
    flags = classify_automaton(automaton_fixture("starter_chain"))

    assert flags.is_st
    assert flags.is_gst
    assert flags.no_silent
    assert not flags.conditions["c"]
    assert not flags.is_reduced
    assert not flags.is_rhda_image


def test_missing_starter_composite_is_reported(automaton_fixture) -> None:
    violations = rhda_image_violations(automaton_fixture("starter_chain"))

    assert [(violation.rule, violation.edges) for violation in violations] == [
        ("starter-composite", ("e1", "e2"))
    ]


def test_conditions_of_a_plain_st_automaton(single_event: PAutomaton) -> None:
    flags = classify_automaton(single_event)

    assert flags.is_proper
    assert flags.conditions == {"a": True, "b": True, "c": False, "d": False, "e": True, "f": True}


def test_bad_transitions_are_counted_per_dimension(single_event, automaton_fixture) -> None:
    counts = bad_transition_counts(single_event)
    wider = bad_transition_counts(automaton_fixture("starter_chain"))

    assert counts.starter_count(1) == 1
    assert counts.terminator_count(1) == 1
    assert counts.total == 2
    assert dict(wider.starters) == {1: 1, 2: 1}
    assert wider.terminator_count(1) == 0


def test_reduce_produces_a_reduced_automaton_with_the_same_language(single_event) -> None:
    reduced = reduce(single_event)

    flags = classify_automaton(reduced)
    assert flags.is_reduced
    assert _forms(reduced) == _forms(single_event)
    assert parse_ipomset("a") in enumerate_language(reduced, 2)


def test_reduce_leaves_reduced_automata_alone(single_event) -> None:
    reduced = reduce(single_event)

    assert reduce(reduced) is reduced


def test_remove_silent_shortcuts_identity_transitions() -> None:
    automaton = _automaton(
        [("p", ()), ("m", ()), ("q", ("a",)), ("r", ())],
        [
            ("s", "p", "m", "I[]"),
            ("e1", "m", "q", "S[a|1]"),
            ("e2", "q", "r", "T[a|1]"),
        ],
        bot=["p"],
        top=["r"],
    )

    cleaned = remove_silent(automaton)

    assert "s" not in cleaned.edges
    assert cleaned.edges["e1~p"].source == "p"
    assert classify_automaton(cleaned).no_silent
    assert _forms(cleaned) == _forms(automaton)


def test_silent_paths_into_accepting_states_make_the_source_accepting() -> None:
    automaton = _automaton([("p", ()), ("m", ())], [("s", "p", "m", "I[]")], bot=["p"], top=["m"])

    assert remove_silent(automaton).top == {"p", "m"}


def test_p_to_st_splits_labels_into_sparse_chains() -> None:
    automaton = _automaton([("p", ()), ("r", ())], [("e", "p", "r", "{a b | 1<2}")], bot=["p"], top=["r"])

    split = p_to_st(automaton)

    assert classify_automaton(split).is_st
    assert sorted(split.edges) == ["e.1", "e.2", "e.3", "e.4"]
    assert split.states["e.1"].mu == ("a",)
    assert split.edges["e.4"].target == "r"
    assert _forms(split) == _forms(automaton)


def test_reduce_handles_silent_and_non_st_labels_together() -> None:
    automaton = _automaton(
        [("p", ()), ("m", ()), ("r", ())],
        [("s", "p", "m", "I[]"), ("e", "m", "r", "{a b}")],
        bot=["p"],
        top=["r"],
    )

    reduced = reduce(automaton)

    assert classify_automaton(reduced).is_reduced
    assert _forms(reduced) == _forms(automaton)


def test_reduce_ab_needs_a_gst_automaton() -> None:
    automaton = _automaton([("p", ()), ("r", ())], [("e", "p", "r", "{a b | 1<2}")], bot=["p"], top=["r"])

    with pytest.raises(PreconditionViolated):
        reduce_ab(automaton)


def test_reduce_ab_separates_initial_and_accepting_states() -> None:
    looping = _automaton(
        [("p", ()), ("q", ("a",))],
        [("e1", "p", "q", "S[a|1]"), ("e2", "q", "p", "T[a|1]")],
        bot=["p"],
        top=["p"],
    )

    separated = reduce_ab(looping)

    flags = classify_automaton(separated)
    assert flags.conditions["a"]
    assert flags.conditions["b"]
    assert "p⊥⊤" in separated.bot & separated.top
    assert _forms(separated) == _forms(looping)


def test_only_bad_transitions_can_be_eliminated(single_event) -> None:
    with pytest.raises(NotBadStarter):
        eliminate_bad_starter(single_event, "e2")
    with pytest.raises(NotBadTerminator):
        eliminate_bad_terminator(single_event, "e1")
    with pytest.raises(UnknownCell):
        eliminate_bad_starter(single_event, "missing")


def test_eliminating_a_bad_starter_glues_it_onto_its_successors(single_event) -> None:
    shortcut = eliminate_bad_starter(single_event, "e1")

    assert "e1" not in shortcut.edges
    assert shortcut.edges["e1*e2"].source == "p"
    assert shortcut.edges["e1*e2"].target == "r"
    assert _forms(shortcut) == _forms(single_event)


def test_split_endpoints_gives_each_endpoint_a_single_transition(single_event) -> None:
    split = split_endpoints(single_event)

    assert split.bot == {"⊥e1"}
    assert split.top == {"⊤e2"}
    assert "p" not in split.states
    assert _forms(split) == _forms(single_event)


def test_renumbering_and_disjoint_sums(single_event) -> None:
    numbered = renumbered(single_event)
    both = disjoint_sum(single_event, single_event)

    assert sorted(numbered.states) == ["q0", "q1", "q2"]
    assert sorted(numbered.edges) == ["e0", "e1"]
    assert both.bot == {"l.p", "r.p"}
    assert _forms(both) == _forms(single_event)


def test_typing_is_checked_on_build() -> None:
    with pytest.raises(InvalidAutomaton):
        _automaton([("p", ()), ("q", ())], [("e", "p", "q", "S[a|1]")], bot=["p"], top=["q"])
    with pytest.raises(UnknownCell):
        _automaton([("p", ())], [("e", "p", "q", "S[a|1]")], bot=["p"], top=[])
    with pytest.raises(InvalidAutomaton):
        PAutomaton.build([State("p", ()), State("p", ())])
