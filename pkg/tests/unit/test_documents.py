from __future__ import annotations

import json

import pytest

from hdaforge.core.complex import Complex
from hdaforge.core.documents import (
    dump_model,
    load_text,
    normalize_text,
    parse_document,
    read_model,
    write_model,
)
from hdaforge.core.exceptions import SchemaError, format_json_path
from hdaforge.core.kleene import EmptyExpr
from hdaforge.core.language import BoundedLanguage, enumerate_language
from hdaforge.core.models import ComplexDocument
from hdaforge.core.parser import parse_expr


def _complex_text(**overrides) -> str:
    document = {
        "version": "hda-forge/1",
        "kind": "complex",
        "variant": "HDA",
        "cells": [{"id": "e0", "ev": ["a"]}, {"id": "v0", "ev": []}, {"id": "v1", "ev": []}],
        "faces": [
            {"cell": "e0", "A": [1], "B": [], "to": ["v0"]},
            {"cell": "e0", "A": [], "B": [1], "to": ["v1"]},
        ],
        "bot": ["v0"],
        "top": ["v1"],
    }
    document.update(overrides)
    return json.dumps(document)


@pytest.mark.parametrize("name", ["single_edge", "starter_chain"])
def test_canonical_fixtures_normalize_to_themselves(fixture_path, name: str) -> None:
    text = fixture_path(name).read_text(encoding="utf-8")

    assert normalize_text(text) == text


def test_normalizing_orders_face_entries(fixture_path) -> None:
    loose = _complex_text()

    assert normalize_text(loose) == fixture_path("single_edge").read_text(encoding="utf-8")


def test_rendering_puts_each_list_object_on_its_own_line(complex_fixture) -> None:
    lines = dump_model(complex_fixture("cone_square")).splitlines()

    assert lines[0] == "{"
    assert lines[1] == '  "version": "hda-forge/1",'
    assert '    {"id": "y", "ev": ["a", "b"], "S": [], "T": [2]},' in lines
    assert lines[-1] == "}"


def test_parse_document_dispatches_on_kind(fixture_path) -> None:
    document = parse_document(fixture_path("square").read_text(encoding="utf-8"))

    assert isinstance(document, ComplexDocument)
    assert len(document.cells) == 9


def test_invalid_json_is_a_schema_error() -> None:
    with pytest.raises(SchemaError) as excinfo:
        parse_document("{not json")

    assert "invalid JSON" in str(excinfo.value)


@pytest.mark.parametrize(
    "text,path",
    [
        (json.dumps({"version": "hda-forge/1", "kind": "complex"}), ("variant",)),
        (
            _complex_text(faces=[{"cell": "e0", "A": [0], "B": [], "to": ["v0"]}]),
            ("faces", 0, "A"),
        ),
        (_complex_text(cells=[{"id": "e0", "ev": ["a"], "S": [1]}]), ("cells", 0)),
        (_complex_text(extra=True), ("extra",)),
    ],
)
def test_schema_errors_point_at_the_offending_field(text: str, path: tuple) -> None:
    with pytest.raises(SchemaError) as excinfo:
        parse_document(text)

    assert excinfo.value.path == path


@pytest.mark.parametrize(
    "faces,path",
    [
        ([{"cell": "ghost", "A": [1], "B": [], "to": ["v0"]}], ("faces", 0, "cell")),
        ([{"cell": "e0", "A": [2], "B": [], "to": ["v0"]}], ("faces", 0, "A")),
        ([{"cell": "e0", "A": [1], "B": [1], "to": ["v0"]}], ("faces", 0)),
    ],
)
def test_face_entries_are_checked_against_their_cell(faces, path) -> None:
    with pytest.raises(SchemaError) as excinfo:
        load_text(_complex_text(faces=faces))

    assert excinfo.value.path == path


def test_bad_transition_labels_are_reported_by_position() -> None:
    text = json.dumps(
        {
            "version": "hda-forge/1",
            "kind": "automaton",
            "states": [{"id": "p", "mu": []}],
            "edges": [{"id": "e", "from": "p", "to": "p", "label": "S[a|7]"}],
        }
    )

    with pytest.raises(SchemaError) as excinfo:
        load_text(text)

    assert excinfo.value.path == ("edges", 0, "label")
    assert str(excinfo.value).startswith("edges[0].label: ")


def test_languages_round_trip_through_their_literals(complex_fixture) -> None:
    language = enumerate_language(complex_fixture("square"), 6)

    text = dump_model(language)
    loaded = load_text(text)

    assert isinstance(loaded, BoundedLanguage)
    assert loaded.forms == language.forms
    assert loaded.exact
    assert json.loads(text)["forms"] == ["{a b}", "{a b | 1<2}", "{b a | 1<2}"]


def test_expressions_round_trip() -> None:
    expr = parse_expr("(S[a|1] ; T[a|1])^+")

    assert load_text(dump_model(expr)) == expr
    assert load_text(dump_model(EmptyExpr())) == EmptyExpr()


def test_write_then_read(tmp_path, complex_fixture) -> None:
    target = tmp_path / "square.json"

    write_model(complex_fixture("square"), target)
    loaded = read_model(target)

    assert isinstance(loaded, Complex)
    assert loaded == complex_fixture("square")


def test_missing_files_are_schema_errors(tmp_path) -> None:
    with pytest.raises(SchemaError):
        read_model(tmp_path / "missing.json")


def test_json_paths_render_like_accessors() -> None:
    assert format_json_path(("cells", 2, "ev")) == "cells[2].ev"
    assert format_json_path(()) == "$"
