from __future__ import annotations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from hdaforge.core.automaton import classify_automaton, reduce
from hdaforge.core.complex import validate
from hdaforge.core.determinize import det, is_deterministic
from hdaforge.core.exceptions import ValidationError
from hdaforge.core.ipomset import compose, isomorphic, oracle_decompose, sparse_decompose
from hdaforge.core.kleene import compile_expr, eval_expr, extract
from hdaforge.core.language import enumerate_language, lang_equiv
from hdaforge.core.sampling import (
    random_expr,
    random_gsta,
    random_ipomset,
    random_phda,
    random_steps,
    random_total_hda,
    seeded_rng,
)
from hdaforge.core.translate import (
    ModelKind,
    cone_of_gsta,
    cone_to_sphda,
    convert,
    hda_to_cone,
    hda_to_ihda,
    ihda_to_sphda,
    phda_of_gsta,
    st_of,
)
from hdaforge.core.variants import Variant

SEEDS = st.integers(min_value=0, max_value=2**32 - 1)


def test_seeded_generators_repeat_themselves() -> None:
    assert random_ipomset(seeded_rng(11)) == random_ipomset(seeded_rng(11))
    assert seeded_rng(11, offset=1).random() == seeded_rng(12).random()


def test_default_seed_comes_from_the_environment(monkeypatch) -> None:
    monkeypatch.setenv("HDA_FORGE_SEED", "99")

    assert seeded_rng().random() == seeded_rng(99).random()


def test_random_steps_alternate_and_respect_the_width(seed: int) -> None:
    steps = random_steps(seeded_rng(seed), 8, max_width=2)

    for first, second in zip(steps, steps[1:], strict=False):
        assert first.kind is not second.kind
    assert all(len(step.base) <= 2 for step in steps)


def test_generator_sizes_are_validated(seed: int) -> None:
    with pytest.raises(ValidationError):
        random_steps(seeded_rng(seed), -1)
    with pytest.raises(ValidationError):
        random_total_hda(seeded_rng(seed), edges=-2)


@given(SEEDS)
def test_random_ipomsets_recompose_from_their_decomposition(seed: int) -> None:
    ipomset = random_ipomset(seeded_rng(seed), max_steps=6)

    assert isomorphic(compose(sparse_decompose(ipomset)), ipomset)
    if ipomset.size <= 3:
        assert oracle_decompose(ipomset) == frozenset({sparse_decompose(ipomset)})


@given(SEEDS)
def test_random_total_hdas_are_valid(seed: int) -> None:
    assert validate(random_total_hda(seeded_rng(seed)), Variant.HDA).valid


@given(SEEDS)
def test_random_partial_hdas_are_valid(seed: int) -> None:
    complex_ = random_phda(seeded_rng(seed))

    assert complex_.variant is Variant.PHDA
    assert validate(complex_).valid


@given(SEEDS)
def test_determinization_preserves_random_languages(seed: int) -> None:
    complex_ = random_phda(seeded_rng(seed))

    deterministic = det(complex_)

    assert is_deterministic(deterministic)
    assert lang_equiv(deterministic, complex_, 6).equal


@given(SEEDS)
def test_reduction_preserves_random_languages(seed: int) -> None:
    automaton = random_gsta(seeded_rng(seed))

    reduced = reduce(automaton)

    assert classify_automaton(reduced).is_reduced
    assert lang_equiv(reduced, automaton, 6).equal
    assert lang_equiv(phda_of_gsta(reduced), automaton, 6).equal


@given(SEEDS)
def test_compiled_random_expressions_keep_their_language(seed: int) -> None:
    expr = random_expr(seeded_rng(seed), depth=2)

    assert lang_equiv(compile_expr(expr), eval_expr(expr, 6), 6).equal


@given(SEEDS)
def test_extracted_expressions_describe_random_hdas(seed: int) -> None:
    complex_ = random_total_hda(seeded_rng(seed), edges=3)

    assert eval_expr(extract(complex_), 6).forms == enumerate_language(complex_, 6).forms


@given(SEEDS)
def test_resolutions_preserve_random_languages(seed: int) -> None:
    complex_ = random_total_hda(seeded_rng(seed), edges=3)

    with_interfaces = hda_to_ihda(complex_)
    with_cones = hda_to_cone(complex_)

    assert validate(with_interfaces, Variant.IHDA).valid
    assert validate(with_cones, Variant.CONE).valid
    for translated in (
        with_interfaces,
        with_cones,
        ihda_to_sphda(with_interfaces),
        cone_to_sphda(with_cones),
    ):
        assert lang_equiv(translated, complex_, 6).equal


@given(SEEDS)
def test_operational_semantics_of_random_partial_hdas(seed: int) -> None:
    complex_ = random_phda(seeded_rng(seed))

    automaton = st_of(complex_)

    assert classify_automaton(automaton).is_st
    assert lang_equiv(automaton, complex_, 6).equal
    assert lang_equiv(phda_of_gsta(reduce(automaton)), complex_, 6).equal


@given(SEEDS)
def test_cones_of_random_automata(seed: int) -> None:
    automaton = random_gsta(seeded_rng(seed))

    cone = cone_of_gsta(reduce(automaton))

    assert validate(cone, Variant.CONE).valid
    assert lang_equiv(cone, automaton, 6).equal


@given(SEEDS)
def test_every_conversion_of_a_random_hda_keeps_its_language(seed: int) -> None:
    complex_ = random_total_hda(seeded_rng(seed), edges=2)

    for kind in ModelKind:
        assert lang_equiv(convert(complex_, kind), complex_, 6).equal, kind
