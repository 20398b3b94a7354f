from __future__ import annotations

from collections.abc import Iterable

from rich.panel import Panel
from rich.text import Text

from hdaforge.core.complex import ValidationReport
from hdaforge.core.determinize import DeterminismReport
from hdaforge.core.language import EquivalenceResult
from hdaforge.core.parser import format_ipomset
from hdaforge.core.variants import Variant, order_variants

_STATUS_STYLE_DEFAULT = "status.info"


def status_panel(message: str, *, status: str = "info", title: str | None = None) -> Panel:
    """Create a standard status panel with theming applied."""

    style_name = f"status.{status}" if status else _STATUS_STYLE_DEFAULT
    return Panel(Text(message), border_style=style_name, title=title)


def format_variant(variant: Variant, *, member: bool) -> Text:
    return Text(variant.value, style="variant.member" if member else "variant.absent")


def format_variants(variants: Iterable[Variant]) -> str:
    """Space-separated variant names in lattice order."""

    return " ".join(variant.value for variant in order_variants(variants))


def describe_validation(report: ValidationReport) -> list[str]:
    if report.valid:
        return [f"valid {report.variant.value}"]
    lines = [f"invalid {report.variant.value}: {len(report.violations)} violations"]
    lines.extend(
        f"  [{violation.rule}] {violation.cell}: {violation.detail}"
        for violation in report.violations
    )
    return lines


def describe_determinism(report: DeterminismReport) -> list[str]:
    if report.deterministic:
        return ["deterministic"]
    lines = [f"not deterministic: {len(report.violations)} witnesses"]
    lines.extend(
        f"  [{violation.rule}] {violation.detail}" for violation in report.violations
    )
    return lines


def describe_equivalence(result: EquivalenceResult) -> str:
    if result.equal:
        return f"equivalent up to bound {result.bound}"
    witness = format_ipomset(result.witness) if result.witness is not None else "?"
    return (
        f"not equivalent up to bound {result.bound}: "
        f"{witness} only in the {result.only_in} language"
    )


__all__ = [
    "describe_determinism",
    "describe_equivalence",
    "describe_validation",
    "format_variant",
    "format_variants",
    "status_panel",
]
