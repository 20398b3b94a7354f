from __future__ import annotations

from enum import StrEnum
from typing import Annotated, Literal

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from hdaforge.core.variants import Variant

DOCUMENT_VERSION = "hda-forge/1"


class DocumentKind(StrEnum):
    COMPLEX = "complex"
    AUTOMATON = "automaton"
    LANGUAGE = "language"
    EXPRESSION = "expression"


def _check_positions(values: list[int]) -> list[int]:
    if any(value < 1 for value in values):
        raise ValueError("indices are 1-based and must be >= 1")
    if len(set(values)) != len(values):
        raise ValueError("indices must not repeat")
    return sorted(values)


class CellModel(BaseModel):
    """One cell: its id, its event conclist and optional 1-based interfaces."""

    model_config = ConfigDict(extra="forbid")

    id: str = Field(min_length=1)
    ev: list[str] = Field(default_factory=list)
    S: list[int] | None = None
    T: list[int] | None = None

    @field_validator("S", "T")
    @classmethod
    def _normalize_interface(cls, value: list[int] | None) -> list[int] | None:
        return None if value is None else _check_positions(value)

    @model_validator(mode="after")
    def _check_interfaces(self) -> CellModel:
        if (self.S is None) != (self.T is None):
            raise ValueError("S and T must be given together")
        for value in (self.S or []) + (self.T or []):
            if value > len(self.ev):
                raise ValueError(f"interface index {value} outside 1..{len(self.ev)}")
        return self


class FaceModel(BaseModel):
    """Face table entry ``d(A, B)(cell) = to`` with 1-based index sets."""

    model_config = ConfigDict(extra="forbid")

    cell: str = Field(min_length=1)
    A: list[int] = Field(default_factory=list)
    B: list[int] = Field(default_factory=list)
    to: list[str] = Field(min_length=1)

    @field_validator("A", "B")
    @classmethod
    def _normalize_indices(cls, value: list[int]) -> list[int]:
        return _check_positions(value)

    @field_validator("to")
    @classmethod
    def _sort_targets(cls, value: list[str]) -> list[str]:
        return sorted(set(value))


class ComplexDocument(BaseModel):
    model_config = ConfigDict(extra="forbid")

    version: Literal["hda-forge/1"] = DOCUMENT_VERSION
    kind: Literal[DocumentKind.COMPLEX] = DocumentKind.COMPLEX
    variant: Variant
    cells: list[CellModel] = Field(default_factory=list)
    faces: list[FaceModel] = Field(default_factory=list)
    bot: list[str] = Field(default_factory=list)
    top: list[str] = Field(default_factory=list)


class StateModel(BaseModel):
    model_config = ConfigDict(extra="forbid")

    id: str = Field(min_length=1)
    mu: list[str] = Field(default_factory=list)


class EdgeModel(BaseModel):
    """Transition with its label in step-atom syntax or as an ipomset literal."""

    model_config = ConfigDict(extra="forbid", populate_by_name=True)

    id: str = Field(min_length=1)
    source: str = Field(alias="from", min_length=1)
    target: str = Field(alias="to", min_length=1)
    label: str = Field(min_length=1)


class AutomatonDocument(BaseModel):
    model_config = ConfigDict(extra="forbid")

    version: Literal["hda-forge/1"] = DOCUMENT_VERSION
    kind: Literal[DocumentKind.AUTOMATON] = DocumentKind.AUTOMATON
    states: list[StateModel] = Field(default_factory=list)
    edges: list[EdgeModel] = Field(default_factory=list)
    bot: list[str] = Field(default_factory=list)
    top: list[str] = Field(default_factory=list)


class LanguageDocument(BaseModel):
    """Canonical literals of a bounded language, in canonical order."""

    model_config = ConfigDict(extra="forbid")

    version: Literal["hda-forge/1"] = DOCUMENT_VERSION
    kind: Literal[DocumentKind.LANGUAGE] = DocumentKind.LANGUAGE
    bound: int = Field(ge=0)
    exact: bool = False
    forms: list[str] = Field(default_factory=list)


class ExpressionDocument(BaseModel):
    model_config = ConfigDict(extra="forbid")

    version: Literal["hda-forge/1"] = DOCUMENT_VERSION
    kind: Literal[DocumentKind.EXPRESSION] = DocumentKind.EXPRESSION
    expr: str = Field(min_length=1)


Document = Annotated[
    ComplexDocument | AutomatonDocument | LanguageDocument | ExpressionDocument,
    Field(discriminator="kind"),
]


__all__ = [
    "AutomatonDocument",
    "CellModel",
    "ComplexDocument",
    "DOCUMENT_VERSION",
    "Document",
    "DocumentKind",
    "EdgeModel",
    "ExpressionDocument",
    "FaceModel",
    "LanguageDocument",
    "StateModel",
]
