from __future__ import annotations

import pytest

from hdaforge.core.exceptions import ExpressionSyntaxError
from hdaforge.core.ipomset import canon, identity, starter, terminator
from hdaforge.core.kleene import (
    ConcatExpr,
    EmptyExpr,
    IdentityAtom,
    PlusExpr,
    StarterAtom,
    TerminatorAtom,
    UnionExpr,
)
from hdaforge.core.parser import (
    format_expr,
    format_ipomset,
    format_label,
    parse_expr,
    parse_ipomset,
    parse_label,
    parse_step,
)


@pytest.mark.parametrize(
    "query,literal",
    [
        ("a", "{a}"),
        ("a||b", "{a b}"),
        ("a;b", "{a b | 1<2}"),
        ("b;a", "{b a | 1<2}"),
        ("a;b;c", "{a b c | 1<2, 1<3, 2<3}"),
        ("{.a c b d. | 1<2, 1<4, 3<4}", "{.a c b d. | 1<2, 1<4, 3<4}"),
    ],
)
def test_format_ipomset_renders_the_canonical_literal(query: str, literal: str) -> None:
    assert format_ipomset(parse_ipomset(query)) == literal


def test_literal_and_shorthand_agree() -> None:
    assert canon(parse_ipomset("{a b | 1<2}")) == canon(parse_ipomset("a;b"))
    assert canon(parse_ipomset("{a b c | 1<2, 2<3}")) == canon(parse_ipomset("a;b;c"))
    assert canon(parse_ipomset("( a || b ) ; c")) == canon(parse_ipomset("{a b c | 1<3, 2<3}"))


def test_identities_render_with_both_interface_marks() -> None:
    assert format_ipomset(identity(("a",))) == "{.a.}"
    assert format_ipomset(identity(())) == "{}"


def test_parse_step_reads_the_three_atom_kinds() -> None:
    assert parse_step("S[a b|2]").encoding() == ("S", ("a", "b"), (1,))
    assert parse_step("T[a b|1,2]").encoding() == ("T", ("a", "b"), (0, 1))
    assert parse_step("I[a]").is_identity


def test_labels_prefer_step_atoms() -> None:
    assert parse_label("S[a|1]") == starter(("a",), {0})
    assert format_label(starter(("a", "b"), {1})) == "S[a b|2]"
    assert format_label(terminator(("a", "b"), {0})) == "T[a b|1]"
    assert format_label(identity(("a", "b"))) == "I[a b]"
    assert format_label(parse_ipomset("a;b")) == "{a b | 1<2}"


def test_parse_expr_builds_the_expected_tree() -> None:
    expr = parse_expr("S[a|1] ; T[a|1] + (S[b|1] ; T[b|1])^+ + 0")

    assert expr == UnionExpr(
        (
            ConcatExpr((StarterAtom(("a",), frozenset({0})), TerminatorAtom(("a",), frozenset({0})))),
            PlusExpr(
                ConcatExpr((StarterAtom(("b",), frozenset({0})), TerminatorAtom(("b",), frozenset({0}))))
            ),
            EmptyExpr(),
        )
    )


@pytest.mark.parametrize(
    "text",
    [
        "S[a|1] ; T[a|1]",
        "S[a|1] ; T[a|1] + S[b|1] ; T[b|1]",
        "(S[a|1] ; T[a|1])^+",
        "(S[a|1] + I[]) ; S[a b|2]",
        "S[a b|1,2] ; T[a b|1,2]",
        "I[a]",
        "0",
    ],
)
def test_format_expr_reproduces_normalized_text(text: str) -> None:
    expr = parse_expr(text)

    assert format_expr(expr) == text
    assert parse_expr(format_expr(expr)) == expr


def test_identity_atoms_take_no_index_set() -> None:
    assert parse_expr("I[a b]") == IdentityAtom(("a", "b"))


@pytest.mark.parametrize(
    "text",
    [
        "S[a|3]",
        "S[a|1] ;",
        "S[a|1] T[a|1]",
        "(S[a|1]",
        "X[a|1]",
    ],
)
def test_parse_expr_rejects_malformed_text(text: str) -> None:
    with pytest.raises(ExpressionSyntaxError) as excinfo:
        parse_expr(text)

    assert excinfo.value.text == text
    assert 0 <= excinfo.value.position <= len(text)


@pytest.mark.parametrize("text", ["{a b | 1<5}", "{a b | 1<}", "a;;b", "a||"])
def test_parse_ipomset_rejects_malformed_text(text: str) -> None:
    with pytest.raises(ExpressionSyntaxError):
        parse_ipomset(text)


def test_the_empty_language_is_not_a_step() -> None:
    with pytest.raises(ExpressionSyntaxError):
        parse_step("0")
