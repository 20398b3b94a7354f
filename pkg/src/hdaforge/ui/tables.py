from __future__ import annotations

from collections.abc import Mapping

from rich.table import Table
from rich.text import Text

from hdaforge.core.automaton import AutomatonClass
from hdaforge.core.complex import ValidationReport
from hdaforge.core.language import BoundedLanguage
from hdaforge.core.parser import format_ipomset
from hdaforge.core.variants import Variant, get_rules
from hdaforge.ui.formatters import format_variant

_CHECK = "✓"
_CROSS = "✗"


def build_classification_table(reports: Mapping[Variant, ValidationReport]) -> Table:
    """One row per variant with its verdict and the first reason it fails."""

    table = Table(expand=True, show_lines=False, highlight=False)
    table.add_column("Variant", style="title")
    table.add_column("Member")
    table.add_column("Conditions", overflow="fold")
    table.add_column("First violation", overflow="fold")
    for variant in Variant:
        report = reports.get(variant)
        if report is None:
            continue
        member = report.valid
        if member:
            reason = Text("—", style="dim")
        else:
            first = report.violations[0]
            reason = Text(f"[{first.rule}] {first.cell}: {first.detail}", style="status.warning")
        table.add_row(
            format_variant(variant, member=member),
            Text(_CHECK if member else _CROSS, style="status.success" if member else "status.error"),
            Text(get_rules(variant).description, style="dim"),
            reason,
        )
    return table


def build_automaton_table(flags: AutomatonClass) -> Table:
    table = Table(expand=False, box=None, show_header=True)
    table.add_column("Property", style="title")
    table.add_column("Holds")
    rows = [
        ("ST-automaton", flags.is_st),
        ("gST-automaton", flags.is_gst),
        ("no silent transitions", flags.no_silent),
        ("proper", flags.is_proper),
        *((f"condition ({name})", held) for name, held in sorted(flags.conditions.items())),
        ("reduced", flags.is_reduced),
        ("rHDA image", flags.is_rhda_image),
    ]
    for name, held in rows:
        table.add_row(name, Text(_CHECK if held else _CROSS, style="status.success" if held else "status.error"))
    return table


def build_language_table(language: BoundedLanguage) -> Table:
    """Accepted ipomsets in canonical order with their sparse length and size."""

    suffix = "exact" if language.exact else "cut"
    table = Table(expand=True, title=f"Language up to bound {language.bound} ({suffix})")
    table.add_column("#", justify="right", style="dim")
    table.add_column("Ipomset", overflow="fold")
    table.add_column("Length", justify="right")
    table.add_column("Events", justify="right")
    for index, form in enumerate(language, start=1):
        table.add_row(str(index), format_ipomset(form), str(form.length), str(form.event_count))
    return table


__all__ = ["build_automaton_table", "build_classification_table", "build_language_table"]
