from __future__ import annotations

from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from enum import StrEnum

import networkx as nx

from hdaforge.core.exceptions import NotAnInclusionEdge


class Variant(StrEnum):
    """Variants of higher-dimensional automata, from most to least constrained."""

    HDA = "HDA"
    IHDA = "iHDA"
    CONE = "coneHDA"
    SPHDA = "spHDA"
    SRHDA = "srHDA"
    PHDA = "pHDA"
    RHDA = "rHDA"


class InterfaceDiscipline(StrEnum):
    NONE = "none"
    INTERFACE = "interface"
    CONE = "cone"


class Composition(StrEnum):
    STRICT = "strict"
    LAX = "lax"


@dataclass(frozen=True, slots=True)
class VariantRules:
    """Defining conditions of a variant, read off by the validator."""

    variant: Variant
    description: str
    functional: bool
    composition: Composition
    interfaces: InterfaceDiscipline = InterfaceDiscipline.NONE
    total: bool = False

    @property
    def uses_interfaces(self) -> bool:
        return self.interfaces is not InterfaceDiscipline.NONE


_VARIANT_RULES: dict[Variant, VariantRules] = {
    rules.variant: rules
    for rules in (
        VariantRules(
            Variant.HDA,
            "Total precubical set: every face exists and composes strictly.",
            functional=True,
            composition=Composition.STRICT,
            total=True,
        ),
        VariantRules(
            Variant.IHDA,
            "Precubical set with interfaces: faces exist exactly where interfaces allow.",
            functional=True,
            composition=Composition.STRICT,
            interfaces=InterfaceDiscipline.INTERFACE,
            total=True,
        ),
        VariantRules(
            Variant.CONE,
            "Cone-shaped cells: lower faces towards the source, upper faces towards the target.",
            functional=True,
            composition=Composition.STRICT,
            interfaces=InterfaceDiscipline.CONE,
            total=True,
        ),
        VariantRules(
            Variant.SPHDA,
            "Strict partial: faces may be missing, composition holds as Kleene equality.",
            functional=True,
            composition=Composition.STRICT,
        ),
        VariantRules(
            Variant.SRHDA,
            "Strict relational: faces are relations composing strictly.",
            functional=False,
            composition=Composition.STRICT,
        ),
        VariantRules(
            Variant.PHDA,
            "Lax partial: composites exist whenever both factors do.",
            functional=True,
            composition=Composition.LAX,
        ),
        VariantRules(
            Variant.RHDA,
            "Lax relational: composites contain the relational composition.",
            functional=False,
            composition=Composition.LAX,
        ),
    )
}

# Inclusions keep the face table unchanged; only the tag moves down the lattice.
# HDA to iHDA and to coneHDA need new cells and live in the translation graph instead.
_INCLUSION_EDGES: tuple[tuple[Variant, Variant], ...] = (
    (Variant.HDA, Variant.SPHDA),
    (Variant.SPHDA, Variant.SRHDA),
    (Variant.SPHDA, Variant.PHDA),
    (Variant.SRHDA, Variant.RHDA),
    (Variant.PHDA, Variant.RHDA),
)

_INCLUSIONS = nx.DiGraph()
_INCLUSIONS.add_nodes_from(Variant)
_INCLUSIONS.add_edges_from(_INCLUSION_EDGES)


def get_variants() -> Sequence[Variant]:
    """Return every variant in lattice order."""

    return tuple(Variant)


def get_rules(variant: Variant | str) -> VariantRules:
    return _VARIANT_RULES[Variant(variant)]


def inclusion_edges() -> Sequence[tuple[Variant, Variant]]:
    return _INCLUSION_EDGES


def is_included(source: Variant, target: Variant) -> bool:
    """True when every ``source`` table is also a ``target`` table."""

    return source == target or nx.has_path(_INCLUSIONS, source, target)


def ensure_included(source: Variant, target: Variant) -> None:
    if not is_included(source, target):
        raise NotAnInclusionEdge(f"{source.value} is not included in {target.value}")


def order_variants(variants: Iterable[Variant]) -> tuple[Variant, ...]:
    chosen = set(variants)
    return tuple(variant for variant in Variant if variant in chosen)


__all__ = [
    "Composition",
    "InterfaceDiscipline",
    "Variant",
    "VariantRules",
    "ensure_included",
    "get_rules",
    "get_variants",
    "inclusion_edges",
    "is_included",
    "order_variants",
]
