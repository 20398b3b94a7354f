from __future__ import annotations

import pytest

from hdaforge.core.automaton import classify_automaton
from hdaforge.core.complex import validate
from hdaforge.core.ipomset import canon, starter
from hdaforge.core.kleene import (
    ConcatExpr,
    EmptyExpr,
    IdentityAtom,
    PlusExpr,
    StarterAtom,
    TerminatorAtom,
    UnionExpr,
    atom_for,
    automaton_of,
    compile_expr,
    concat_of,
    eval_expr,
    extract,
    plus_of,
    union_of,
)
from hdaforge.core.language import enumerate_language, lang_equiv
from hdaforge.core.parser import parse_expr, parse_ipomset
from hdaforge.core.variants import Variant

EXPRESSIONS = [
    "S[a|1] ; T[a|1]",
    "S[a|1] ; T[a|1] + S[b|1] ; T[b|1]",
    "(S[a|1] ; T[a|1])^+",
    "S[a b|1,2] ; T[a b|1,2]",
    "S[a|1] ; S[a b|2] ; T[a b|1] ; T[b|1]",
    "(S[a|1] + I[]) ; T[a|1]",
]


def forms(*texts: str):
    return frozenset(canon(parse_ipomset(text)) for text in texts)


def test_eval_expr_glues_atoms() -> None:
    language = eval_expr(parse_expr("S[a|1] ; T[a|1] ; S[b|1] ; T[b|1]"), 4)

    assert language.forms == forms("a;b")
    assert language.exact


def test_eval_expr_cuts_iterations_at_the_bound() -> None:
    language = eval_expr(parse_expr("(S[a|1] ; T[a|1])^+"), 4)

    assert language.forms == forms("a", "a;a")
    assert not language.exact


def test_the_empty_expression_denotes_nothing() -> None:
    assert len(eval_expr(EmptyExpr(), 6)) == 0
    assert len(compile_expr(EmptyExpr())) == 0


@pytest.mark.parametrize("text", EXPRESSIONS)
def test_compiled_partial_hda_recognizes_the_expression(text: str) -> None:
    expr = parse_expr(text)

    compiled = compile_expr(expr)

    assert compiled.variant is Variant.PHDA
    assert validate(compiled).valid
    assert lang_equiv(compiled, eval_expr(expr, 6), 6).equal


@pytest.mark.parametrize("text", EXPRESSIONS)
def test_automaton_of_is_reduced(text: str) -> None:
    assert classify_automaton(automaton_of(parse_expr(text))).is_reduced


@pytest.mark.parametrize("name", ["single_edge", "square", "branching_hda", "partial_square"])
def test_extract_describes_the_language_of_a_complex(complex_fixture, name: str) -> None:
    complex_ = complex_fixture(name)

    expr = extract(complex_)

    assert eval_expr(expr, 6).forms == enumerate_language(complex_, 6).forms


def test_extract_of_a_compiled_expression_round_trips_the_language() -> None:
    expr = parse_expr("(S[a|1] ; T[a|1])^+")

    again = extract(compile_expr(expr))

    assert eval_expr(again, 6).forms == eval_expr(expr, 6).forms


def test_atom_for_reads_discrete_labels() -> None:
    assert atom_for(starter(("a", "b"), {1})) == StarterAtom(("a", "b"), frozenset({1}))
    assert atom_for(starter(("a",), ())) == IdentityAtom(("a",))
    with pytest.raises(ValueError):
        atom_for(parse_ipomset("a"))


def test_smart_constructors_normalize() -> None:
    a = StarterAtom(("a",), frozenset({0}))
    b = TerminatorAtom(("a",), frozenset({0}))

    assert union_of([]) == EmptyExpr()
    assert union_of([a, EmptyExpr(), a]) == a
    assert union_of([UnionExpr((a, b)), a]) == union_of([b, a])
    assert concat_of([a, EmptyExpr()]) == EmptyExpr()
    assert concat_of([IdentityAtom(()), a, ConcatExpr((b,))]) == ConcatExpr((a, b))
    assert concat_of([IdentityAtom(("a",))]) == IdentityAtom(("a",))
    assert plus_of(PlusExpr(a)) == PlusExpr(a)
    assert plus_of(IdentityAtom(())) == IdentityAtom(())


def test_concat_of_respects_interface_types() -> None:
    start_a = StarterAtom(("a",), frozenset({0}))
    start_b = StarterAtom(("b",), frozenset({0}))
    glued = ConcatExpr((IdentityAtom(("a",)), start_b))

    assert concat_of(glued.items) == EmptyExpr()
    assert eval_expr(glued, 4).forms == frozenset()
    assert concat_of([IdentityAtom(("a",)), IdentityAtom(("b",))]) == EmptyExpr()
    assert concat_of([IdentityAtom(("a",)), IdentityAtom(("a",))]) == IdentityAtom(("a",))
    assert concat_of([start_a, IdentityAtom(("a",))]) == start_a


def test_concat_of_keeps_identities_that_filter_mixed_unions() -> None:
    mixed = UnionExpr((StarterAtom(("a",), frozenset({0})), StarterAtom(("b",), frozenset({0}))))

    kept = concat_of([mixed, IdentityAtom(("a",))])

    assert kept == ConcatExpr((mixed, IdentityAtom(("a",))))
    assert eval_expr(kept, 4).forms == eval_expr(StarterAtom(("a",), frozenset({0})), 4).forms


def test_union_of_orders_by_canonical_first_atom() -> None:
    start = StarterAtom(("a",), frozenset({0}))
    finish = TerminatorAtom(("a",), frozenset({0}))
    idle = IdentityAtom(("a",))

    assert union_of([finish, start, idle]).items == (idle, start, finish)
    assert union_of([ConcatExpr((start, finish)), start]).items == (start, ConcatExpr((start, finish)))
