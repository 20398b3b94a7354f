from __future__ import annotations

from pathlib import Path

import typer

from hdaforge.cli.app import CLIContext
from hdaforge.cli.support import (
    EXIT_NEGATIVE,
    OUTPUT_OPTION,
    PATH_ARGUMENT,
    emit,
    fail,
    load,
    load_recognizer,
)
from hdaforge.core.automaton import PAutomaton, classify_automaton
from hdaforge.core.complex import Complex, classify, validate
from hdaforge.core.dot import to_dot
from hdaforge.core.exceptions import HdaForgeError, PreconditionViolated
from hdaforge.core.variants import Variant
from hdaforge.ui.formatters import describe_validation, format_variants
from hdaforge.ui.tables import build_automaton_table, build_classification_table

_VARIANT_OPTION = typer.Option(
    None,
    "--variant",
    help="Check against this variant instead of the document's own tag.",
    case_sensitive=False,
)

_TABLE_OPTION = typer.Option(
    False,
    "--table",
    help="Render a table instead of plain text.",
    show_default=False,
)


def register(app: typer.Typer) -> None:
    """Register the validate, classify and dot commands."""

    app.command("validate")(validate_command)
    app.command("classify")(classify_command)
    app.command("dot")(dot_command)


def validate_command(
    ctx: typer.Context,
    path: Path = PATH_ARGUMENT,
    variant: Variant | None = _VARIANT_OPTION,
) -> None:
    """Check a complex against its variant's face conditions."""

    cli_ctx = ctx.ensure_object(CLIContext)
    try:
        model = load(path)
        if isinstance(model, PAutomaton):
            typer.echo(f"valid P-automaton ({len(model.states)} states, {len(model.edges)} transitions)")
            return
        if not isinstance(model, Complex):
            raise PreconditionViolated("validate expects a complex or an automaton document")
        report = validate(model, variant)
    except HdaForgeError as exc:
        fail(cli_ctx, exc, title="Invalid input")

    for line in describe_validation(report):
        typer.echo(line)
    if not report.valid:
        raise typer.Exit(code=EXIT_NEGATIVE)


def classify_command(
    ctx: typer.Context,
    path: Path = PATH_ARGUMENT,
    table: bool = _TABLE_OPTION,
) -> None:
    """List every variant (or automaton class) the document belongs to."""

    cli_ctx = ctx.ensure_object(CLIContext)
    try:
        model = load_recognizer(path)
    except HdaForgeError as exc:
        fail(cli_ctx, exc, title="Invalid input")

    if isinstance(model, PAutomaton):
        flags = classify_automaton(model)
        if table:
            cli_ctx.console.print(build_automaton_table(flags))
            return
        names = ["PA"]
        names += ["gSTA"] if flags.is_gst else []
        names += ["STA"] if flags.is_st else []
        names += ["reduced"] if flags.is_reduced else []
        names += ["rHDA-image"] if flags.is_rhda_image else []
        typer.echo(" ".join(names))
        return

    if table:
        reports = {variant: validate(model, variant) for variant in Variant}
        cli_ctx.console.print(build_classification_table(reports))
        return
    typer.echo(format_variants(classify(model)) or "none")


def dot_command(
    ctx: typer.Context,
    path: Path = PATH_ARGUMENT,
    output: Path | None = OUTPUT_OPTION,
) -> None:
    """Export a complex or automaton as Graphviz DOT."""

    cli_ctx = ctx.ensure_object(CLIContext)
    try:
        emit(to_dot(load_recognizer(path)), output)
    except HdaForgeError as exc:
        fail(cli_ctx, exc, title="Export failed")


__all__ = ["classify_command", "dot_command", "register", "validate_command"]
