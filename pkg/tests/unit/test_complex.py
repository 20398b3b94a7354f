from __future__ import annotations

import pytest

from hdaforge.core.complex import (
    Cell,
    Complex,
    classify,
    disjoint_pairs,
    format_index_set,
    lift_indices,
    push_indices,
    remaining_positions,
    step_graph,
    trim,
    validate,
)
from hdaforge.core.exceptions import (
    IndexOutOfRange,
    InvalidComplex,
    NotAnInclusionEdge,
    UnknownCell,
)
from hdaforge.core.variants import (
    Variant,
    ensure_included,
    get_rules,
    get_variants,
    is_included,
    order_variants,
)

V = Variant


@pytest.mark.parametrize(
    "name,expected",
    [
        ("square", {V.HDA, V.IHDA, V.SPHDA, V.SRHDA, V.PHDA, V.RHDA}),
        ("interface_square", {V.IHDA, V.SPHDA, V.SRHDA, V.PHDA, V.RHDA}),
        ("sparse_square", {V.SPHDA, V.SRHDA, V.PHDA, V.RHDA}),
        ("partial_square", {V.PHDA, V.RHDA}),
        ("strict_relational_square", {V.SRHDA, V.RHDA}),
        ("relational_square", {V.RHDA}),
        ("cone_square", {V.CONE, V.SPHDA, V.SRHDA, V.PHDA, V.RHDA}),
        ("transfer_square", {V.PHDA, V.RHDA}),
    ],
)
def test_classify_reports_every_satisfied_variant(complex_fixture, name, expected) -> None:
    assert classify(complex_fixture(name)) == frozenset(expected)


@pytest.mark.parametrize(
    "name,variant,rule",
    [
        ("partial_square", V.SPHDA, "strict"),
        ("strict_relational_square", V.SPHDA, "functional"),
        ("partial_square", V.HDA, "total"),
        ("transfer_square", V.SPHDA, "strict"),
    ],
)
def test_validate_names_the_broken_rule(complex_fixture, name, variant, rule) -> None:
    report = validate(complex_fixture(name), variant)

    assert not report
    assert report.variant is variant
    assert rule in {violation.rule for violation in report.violations}


def test_validate_defaults_to_the_declared_variant(complex_fixture) -> None:
    report = validate(complex_fixture("square"))

    assert report.variant is V.HDA
    assert report.valid
    assert report.violations == ()


def test_face_lookup(complex_fixture) -> None:
    square = complex_fixture("square")

    assert square.face("x", (), ()) == {"x"}
    assert square.face("x", {0}, ()) == {"eb0"}
    assert square.face("x", {1}, {0}) == {"v10"}
    assert square.face("x", {0, 1}, ()) == {"v00"}


def test_missing_faces_are_empty(complex_fixture) -> None:
    partial = complex_fixture("partial_square")

    assert partial.face("x", {0}, ()) == frozenset()
    assert partial.face("x", {0, 1}, ()) == {"v00"}


def test_relational_faces_may_hold_several_cells(complex_fixture) -> None:
    assert complex_fixture("relational_square").face("x", {0, 1}, ()) == {"u", "v"}


def test_face_rejects_bad_index_sets(complex_fixture) -> None:
    square = complex_fixture("square")

    with pytest.raises(IndexOutOfRange):
        square.face("x", {0}, {0})
    with pytest.raises(IndexOutOfRange):
        square.face("ea0", {1}, ())
    with pytest.raises(UnknownCell):
        square.face("nowhere", (), ())


def test_face_entries_are_ordered_by_cell_then_index_sets(complex_fixture) -> None:
    entries = [
        (cell, tuple(sorted(lower)), tuple(sorted(upper)))
        for cell, lower, upper, _ in complex_fixture("single_edge").face_entries()
    ]

    assert entries == [("e0", (), (0,)), ("e0", (0,), ())]


def test_interfaces_are_implied_by_missing_singleton_faces(complex_fixture) -> None:
    assert complex_fixture("square").interfaces("x") == (frozenset(), frozenset())
    assert complex_fixture("partial_square").interfaces("x") == (frozenset({0}), frozenset())


def test_stored_interfaces_win(complex_fixture) -> None:
    cone = complex_fixture("cone_square")

    assert cone.interfaces("y") == (frozenset(), frozenset({1}))
    assert cone.cell("y").has_interface


def test_build_merges_repeated_keys_and_drops_empty_ones() -> None:
    complex_ = Complex.build(
        V.RHDA,
        [Cell("e", ("a",)), Cell("u", ()), Cell("v", ())],
        [
            ("e", [0], [], ["u"]),
            ("e", [0], [], ["v"]),
            ("e", [], [0], []),
            ("e", [], [], ["u"]),
        ],
    )

    assert complex_.face("e", {0}, ()) == {"u", "v"}
    assert complex_.face("e", (), {0}) == frozenset()
    assert dict(complex_.faces["e"]).keys() == {(frozenset({0}), frozenset())}


def test_build_rejects_duplicate_ids() -> None:
    with pytest.raises(InvalidComplex):
        Complex.build(V.HDA, [Cell("v", ()), Cell("v", ())])


def test_build_rejects_badly_typed_faces() -> None:
    with pytest.raises(InvalidComplex):
        Complex.build(V.HDA, [Cell("e", ("a",)), Cell("f", ("b",))], [("e", [0], [], ["f"])])


def test_build_rejects_dangling_ids() -> None:
    with pytest.raises(UnknownCell):
        Complex.build(V.HDA, [Cell("e", ("a",))], [("e", [0], [], ["ghost"])])
    with pytest.raises(UnknownCell):
        Complex.build(V.HDA, [Cell("v", ())], bot=["ghost"])


def test_cells_need_both_interfaces_or_neither() -> None:
    with pytest.raises(InvalidComplex):
        Cell("e", ("a",), source=frozenset())
    with pytest.raises(IndexOutOfRange):
        Cell("e", ("a",), source=frozenset({1}), target=frozenset())


def test_step_graph_links_faces_to_their_cells(complex_fixture) -> None:
    graph = step_graph(complex_fixture("single_edge"))

    assert set(graph.nodes) == {"e0", "v0", "v1"}
    assert set(graph.edges) == {("v0", "e0"), ("e0", "v1")}


def test_trim_drops_unreachable_cells(complex_fixture) -> None:
    edge = complex_fixture("single_edge")
    padded = Complex(
        variant=edge.variant,
        cells={**edge.cells, "w": Cell("w", ())},
        faces=edge.faces,
        bot=edge.bot,
        top=edge.top | {"w"},
    )

    trimmed = trim(padded)

    assert set(trimmed.cells) == {"e0", "v0", "v1"}
    assert trimmed.top == {"v1"}
    assert set(trim(complex_fixture("square")).cells) == set(complex_fixture("square").cells)


def test_trim_to_the_upper_corner_drops_the_lower_branch(complex_fixture) -> None:
    branching = complex_fixture("branching_hda")
    cornered = Complex(
        variant=branching.variant,
        cells=branching.cells,
        faces=branching.faces,
        bot=branching.bot,
        top=frozenset({"v11"}),
    )

    trimmed = trim(cornered)

    assert set(trimmed.cells) == {"ea0", "ea1", "eb0", "eb1", "v00", "v01", "v10", "v11", "x"}
    assert trimmed.face("x", {0, 1}, ()) == {"v00"}
    assert validate(trimmed, V.HDA).valid


def test_restricted_cuts_entries_to_the_kept_cells(complex_fixture) -> None:
    square = complex_fixture("square")

    kept = square.restricted({"x", "ea0", "v00", "v10"})

    assert kept.face("x", {1}, ()) == {"ea0"}
    assert kept.face("x", {0}, ()) == frozenset()
    assert kept.bot == {"v00"}
    assert kept.top == frozenset()


def test_disjoint_pairs_counts() -> None:
    assert len(list(disjoint_pairs(2))) == 8
    assert len(list(disjoint_pairs(2, proper=False))) == 9
    assert list(disjoint_pairs(0)) == []


def test_index_helpers_translate_between_face_and_parent_positions() -> None:
    assert remaining_positions(4, {1}) == (0, 2, 3)
    assert lift_indices(4, {1}, {0, 1}) == {0, 2}
    assert push_indices(4, {1}, {2, 3}) == {1, 2}
    assert format_index_set({2, 0}) == "1,3"


def test_variant_lattice() -> None:
    assert get_variants()[0] is V.HDA
    assert is_included(V.HDA, V.RHDA)
    assert is_included(V.PHDA, V.PHDA)
    assert not is_included(V.PHDA, V.SRHDA)
    assert not is_included(V.HDA, V.IHDA)
    assert order_variants({V.RHDA, V.HDA, V.PHDA}) == (V.HDA, V.PHDA, V.RHDA)
    assert get_rules("pHDA").description


def test_ensure_included_rejects_upward_moves() -> None:
    ensure_included(V.SPHDA, V.RHDA)
    with pytest.raises(NotAnInclusionEdge):
        ensure_included(V.RHDA, V.SPHDA)
