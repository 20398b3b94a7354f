"""Reading and writing the JSON interchange documents.

Documents are rendered with one top-level key per line and one JSON object per line
inside lists of objects, so fixture diffs stay readable and output is byte-stable.
"""

from __future__ import annotations

import json
import logging
from collections.abc import Iterable
from pathlib import Path
from typing import Any

from pydantic import BaseModel, TypeAdapter
from pydantic import ValidationError as PydanticValidationError

from hdaforge.core.automaton import PAutomaton, State, Transition
from hdaforge.core.complex import Cell, Complex
from hdaforge.core.exceptions import HdaForgeError, SchemaError
from hdaforge.core.ipomset import canon
from hdaforge.core.kleene import RationalExpr
from hdaforge.core.language import BoundedLanguage
from hdaforge.core.models import (
    AutomatonDocument,
    CellModel,
    ComplexDocument,
    Document,
    EdgeModel,
    ExpressionDocument,
    FaceModel,
    LanguageDocument,
    StateModel,
)
from hdaforge.core.parser import (
    format_expr,
    format_ipomset,
    format_label,
    parse_expr,
    parse_ipomset,
    parse_label,
)

_LOGGER = logging.getLogger(__name__)

_ADAPTER: TypeAdapter[Document] = TypeAdapter(Document)

Loaded = Complex | PAutomaton | BoundedLanguage | RationalExpr


def parse_document(text: str) -> Document:
    """Validate JSON text against the document schemas."""

    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"invalid JSON: {exc.msg} (line {exc.lineno}, column {exc.colno})") from exc
    try:
        return _ADAPTER.validate_python(raw)
    except PydanticValidationError as exc:
        error = exc.errors()[0]
        location = list(error["loc"])
        if location and isinstance(raw, dict) and location[0] == raw.get("kind"):
            location = location[1:]
        _LOGGER.debug("Rejecting document: %d schema errors", exc.error_count())
        raise SchemaError(error["msg"], path=location) from exc


def complex_from_document(document: ComplexDocument) -> Complex:
    cells: list[Cell] = []
    sizes: dict[str, int] = {}
    for cell in document.cells:
        source = None if cell.S is None else _zero_based(cell.S)
        target = None if cell.T is None else _zero_based(cell.T)
        cells.append(Cell(cell.id, tuple(cell.ev), source, target))
        sizes[cell.id] = len(cell.ev)
    faces = []
    for position, face in enumerate(document.faces):
        size = sizes.get(face.cell)
        if size is None:
            raise SchemaError(f"unknown cell {face.cell!r}", path=("faces", position, "cell"))
        for field in ("A", "B"):
            indices = getattr(face, field)
            if any(index > size for index in indices):
                raise SchemaError(
                    f"index outside 1..{size} of cell {face.cell!r}", path=("faces", position, field)
                )
        if set(face.A) & set(face.B):
            raise SchemaError("A and B must be disjoint", path=("faces", position))
        faces.append((face.cell, _zero_based(face.A), _zero_based(face.B), face.to))
    return Complex.build(document.variant, cells, faces, bot=document.bot, top=document.top)


def complex_to_document(complex_: Complex) -> ComplexDocument:
    cells = []
    for cell_id in sorted(complex_.cells):
        cell = complex_.cells[cell_id]
        cells.append(
            CellModel(
                id=cell.id,
                ev=list(cell.ev),
                S=None if cell.source is None else _one_based(cell.source),
                T=None if cell.target is None else _one_based(cell.target),
            )
        )
    faces = [
        FaceModel(cell=cell_id, A=_one_based(lower), B=_one_based(upper), to=sorted(targets))
        for cell_id, lower, upper, targets in complex_.face_entries()
    ]
    return ComplexDocument(
        variant=complex_.variant,
        cells=cells,
        faces=faces,
        bot=sorted(complex_.bot),
        top=sorted(complex_.top),
    )


def automaton_from_document(document: AutomatonDocument) -> PAutomaton:
    states = [State(state.id, tuple(state.mu)) for state in document.states]
    edges = []
    for position, edge in enumerate(document.edges):
        try:
            label = parse_label(edge.label)
        except HdaForgeError as exc:
            raise SchemaError(str(exc), path=("edges", position, "label")) from exc
        edges.append(Transition(edge.id, edge.source, edge.target, label))
    return PAutomaton.build(states, edges, bot=document.bot, top=document.top)


def automaton_to_document(automaton: PAutomaton) -> AutomatonDocument:
    return AutomatonDocument(
        states=[
            StateModel(id=state_id, mu=list(automaton.states[state_id].mu))
            for state_id in sorted(automaton.states)
        ],
        edges=[
            EdgeModel(id=edge.id, source=edge.source, target=edge.target, label=format_label(edge.label))
            for edge in automaton.sorted_edges()
        ],
        bot=sorted(automaton.bot),
        top=sorted(automaton.top),
    )


def language_from_document(document: LanguageDocument) -> BoundedLanguage:
    forms = []
    for position, literal in enumerate(document.forms):
        try:
            forms.append(parse_ipomset(literal))
        except HdaForgeError as exc:
            raise SchemaError(str(exc), path=("forms", position)) from exc
    return BoundedLanguage(
        frozenset(canon(form) for form in forms), bound=document.bound, exact=document.exact
    )


def language_to_document(language: BoundedLanguage) -> LanguageDocument:
    return LanguageDocument(
        bound=language.bound,
        exact=language.exact,
        forms=[format_ipomset(form) for form in language],
    )


def expression_from_document(document: ExpressionDocument) -> RationalExpr:
    try:
        return parse_expr(document.expr)
    except HdaForgeError as exc:
        raise SchemaError(str(exc), path=("expr",)) from exc


def expression_to_document(expr: RationalExpr) -> ExpressionDocument:
    return ExpressionDocument(expr=format_expr(expr))


def load_text(text: str) -> Loaded:
    """Parse a document and build the model it describes."""

    document = parse_document(text)
    if isinstance(document, ComplexDocument):
        return complex_from_document(document)
    if isinstance(document, AutomatonDocument):
        return automaton_from_document(document)
    if isinstance(document, LanguageDocument):
        return language_from_document(document)
    return expression_from_document(document)


def read_model(path: Path) -> Loaded:
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise SchemaError(f"cannot read {path}: {exc.strerror}") from exc
    model = load_text(text)
    _LOGGER.debug("Read %s from %s", type(model).__name__, path)
    return model


def to_document(model: Loaded) -> BaseModel:
    if isinstance(model, Complex):
        return complex_to_document(model)
    if isinstance(model, PAutomaton):
        return automaton_to_document(model)
    if isinstance(model, BoundedLanguage):
        return language_to_document(model)
    return expression_to_document(model)


def render_document(document: BaseModel) -> str:
    data: dict[str, Any] = document.model_dump(mode="json", by_alias=True, exclude_none=True)
    lines = ["{"]
    items = list(data.items())
    for position, (key, value) in enumerate(items):
        comma = "," if position < len(items) - 1 else ""
        if isinstance(value, list) and value and all(isinstance(entry, dict) for entry in value):
            lines.append(f"  {json.dumps(key)}: [")
            lines.extend(_object_lines(value))
            lines.append(f"  ]{comma}")
        else:
            lines.append(f"  {json.dumps(key)}: {json.dumps(value, ensure_ascii=False)}{comma}")
    lines.append("}")
    return "\n".join(lines) + "\n"


def dump_model(model: Loaded) -> str:
    return render_document(to_document(model))


def write_model(model: Loaded, path: Path) -> None:
    path.write_text(dump_model(model), encoding="utf-8")
    _LOGGER.debug("Wrote %s to %s", type(model).__name__, path)


def normalize_text(text: str) -> str:
    """Round-trip ``text`` through the model layer."""

    return dump_model(load_text(text))


def _object_lines(entries: list[dict[str, Any]]) -> Iterable[str]:
    for position, entry in enumerate(entries):
        comma = "," if position < len(entries) - 1 else ""
        yield f"    {json.dumps(entry, ensure_ascii=False)}{comma}"


def _zero_based(indices: Iterable[int]) -> frozenset[int]:
    return frozenset(index - 1 for index in indices)


def _one_based(indices: Iterable[int]) -> list[int]:
    return sorted(index + 1 for index in indices)


__all__ = [
    "Loaded",
    "automaton_from_document",
    "automaton_to_document",
    "complex_from_document",
    "complex_to_document",
    "dump_model",
    "expression_from_document",
    "expression_to_document",
    "language_from_document",
    "language_to_document",
    "load_text",
    "normalize_text",
    "parse_document",
    "read_model",
    "render_document",
    "to_document",
    "write_model",
]
