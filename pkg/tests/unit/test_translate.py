from __future__ import annotations

import pytest

from hdaforge.core.automaton import classify_automaton, reduce
from hdaforge.core.complex import Complex, classify, trim, validate
from hdaforge.core.exceptions import (
    NoTranslationPath,
    NotAnInclusionEdge,
    NotReduced,
    PreconditionViolated,
)
from hdaforge.core.language import lang_equiv
from hdaforge.core.translate import (
    ModelKind,
    cone_of_gsta,
    cone_to_sphda,
    convert,
    hda_to_cone,
    hda_to_ihda,
    ihda_to_sphda,
    model_kind,
    phda_of_gsta,
    resolved_id,
    st_of,
    translation_path,
    widen,
)
from hdaforge.core.variants import Variant


def test_widen_moves_down_the_lattice_only(complex_fixture) -> None:
    square = complex_fixture("square")

    widened = widen(square, "rHDA")

    assert widened.variant is Variant.RHDA
    assert widened.faces == square.faces
    with pytest.raises(NotAnInclusionEdge):
        widen(widened, Variant.HDA)


def test_interface_resolution_of_a_single_edge(complex_fixture) -> None:
    edge = complex_fixture("single_edge")

    resolved = hda_to_ihda(edge)

    assert set(resolved.cells) == {
        "(e0||)",
        "(e0|1|)",
        "(e0||1)",
        "(e0|1|1)",
        "(v0||)",
        "(v1||)",
    }
    assert resolved.face("(e0||)", {0}, ()) == {"(v0||)"}
    assert resolved.face("(e0|1|)", {0}, ()) == frozenset()
    assert resolved.bot == {"(v0||)"}
    assert Variant.IHDA in classify(resolved)


@pytest.mark.parametrize("resolve,variant", [(hda_to_ihda, Variant.IHDA), (hda_to_cone, Variant.CONE)])
def test_resolutions_preserve_the_language(complex_fixture, resolve, variant) -> None:
    square = complex_fixture("square")

    resolved = resolve(square)

    assert validate(resolved, variant).valid
    assert lang_equiv(resolved, square, 6).equal


def test_trimmed_resolution_keeps_only_the_cells_after_the_initial_edge(complex_fixture) -> None:
    square = complex_fixture("initial_edge_square")

    trimmed = trim(hda_to_ihda(square))

    assert set(trimmed.cells) == {"(ea0|1|)", "(v10||)", "(eb1||)", "(x|1|)", "(ea1|1|)", "(v11||)"}
    assert trimmed.bot == {"(ea0|1|)"}
    assert trimmed.top == {"(v11||)"}
    assert validate(trimmed, Variant.IHDA).valid
    assert lang_equiv(trimmed, square, 6).equal


def test_resolutions_need_an_hda(complex_fixture) -> None:
    with pytest.raises(PreconditionViolated):
        hda_to_ihda(complex_fixture("partial_square"))


def test_forgetting_interfaces_yields_strict_partial_hdas(complex_fixture) -> None:
    square = complex_fixture("square")

    from_interfaces = ihda_to_sphda(hda_to_ihda(square))
    from_cone = cone_to_sphda(complex_fixture("cone_square"))

    assert from_interfaces.variant is Variant.SPHDA
    assert validate(from_interfaces).valid
    assert lang_equiv(from_interfaces, square, 6).equal
    assert validate(from_cone).valid
    assert all(not cell.has_interface for cell in from_cone.cells.values())


def test_st_automaton_has_one_transition_per_step(complex_fixture) -> None:
    edge = complex_fixture("single_edge")

    automaton = st_of(edge)

    assert sorted(automaton.edges) == ["e0>v1/T1", "v0>e0/S1"]
    assert automaton.states["e0"].mu == ("a",)
    assert classify_automaton(automaton).is_st
    assert lang_equiv(automaton, edge, 6).equal


def test_st_automata_of_relational_hdas_contain_step_composites(complex_fixture) -> None:
    assert classify_automaton(st_of(complex_fixture("square"))).is_rhda_image


@pytest.mark.parametrize("build,variant", [(phda_of_gsta, Variant.PHDA), (cone_of_gsta, Variant.CONE)])
def test_reduced_automata_translate_back_to_complexes(complex_fixture, build, variant) -> None:
    square = complex_fixture("square")
    reduced = reduce(st_of(square))

    result = build(reduced)

    assert isinstance(result, Complex)
    assert validate(result, variant).valid
    assert lang_equiv(result, square, 6).equal


def test_cone_of_a_single_transition(automaton_fixture) -> None:
    automaton = automaton_fixture("cone_transition")

    cone = cone_of_gsta(automaton)

    assert set(cone.cells) == {"z:p", "z:q", "y:e:*", "y:e:0:1", "y:e:0:2"}
    assert cone.face("y:e:*", {0, 1}, ()) == {"z:p"}
    assert cone.face("y:e:*", (), {0}) == {"z:q"}
    assert cone.face("y:e:0:1", {0}, ()) == {"z:p"}
    assert cone.bot == {"z:p"}
    assert cone.top == {"z:q"}
    assert Variant.CONE in classify(cone)
    assert not {Variant.HDA, Variant.IHDA} & classify(cone)
    assert lang_equiv(cone, automaton, 6).equal


def test_constructions_from_automata_need_reduced_input(complex_fixture) -> None:
    automaton = st_of(complex_fixture("single_edge"))

    with pytest.raises(NotReduced):
        phda_of_gsta(automaton)
    with pytest.raises(NotReduced):
        cone_of_gsta(automaton)


def test_translation_paths(complex_fixture, automaton_fixture) -> None:
    path = translation_path("HDA", "reduced")

    assert path[0] is ModelKind.HDA
    assert path[-1] is ModelKind.REDUCED
    assert len(path) == 8
    assert translation_path("pHDA", "pHDA") == [ModelKind.PHDA]
    assert model_kind(automaton_fixture("starter_chain")) is ModelKind.STA
    assert model_kind(complex_fixture("partial_square")) is ModelKind.PHDA
    with pytest.raises(NoTranslationPath):
        translation_path("rHDA", "HDA")


def test_convert_walks_the_shortest_chain(complex_fixture) -> None:
    edge = complex_fixture("single_edge")

    widened = convert(edge, "pHDA")
    round_trip = convert(st_of(edge), ModelKind.PHDA)

    assert isinstance(widened, Complex)
    assert widened.variant is Variant.PHDA
    assert isinstance(round_trip, Complex)
    assert lang_equiv(round_trip, edge, 6).equal


def test_convert_checks_a_declared_source_variant(complex_fixture) -> None:
    with pytest.raises(PreconditionViolated):
        convert(complex_fixture("partial_square"), "coneHDA", source="HDA")


def test_resolved_ids_use_one_based_positions() -> None:
    assert resolved_id("x", {0, 1}, ()) == "(x|1,2|)"
