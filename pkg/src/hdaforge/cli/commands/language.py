from __future__ import annotations

from pathlib import Path

import typer

from hdaforge.cli.app import CLIContext
from hdaforge.cli.support import (
    BOUND_OPTION,
    EXIT_NEGATIVE,
    OUTPUT_OPTION,
    PATH_ARGUMENT,
    contains,
    emit,
    fail,
    language_of,
    load,
    resolve_bound,
)
from hdaforge.core.documents import dump_model
from hdaforge.core.exceptions import HdaForgeError
from hdaforge.core.language import lang_equiv
from hdaforge.core.parser import parse_ipomset
from hdaforge.ui.formatters import describe_equivalence
from hdaforge.ui.tables import build_language_table

_QUERY_ARGUMENT = typer.Argument(
    ...,
    help="Ipomset literal such as '{a b | 1<2}' or shorthand such as 'a||b;c'.",
)

_LEFT_ARGUMENT = typer.Argument(..., exists=True, dir_okay=False, readable=True, help="First document.")

_RIGHT_ARGUMENT = typer.Argument(..., exists=True, dir_okay=False, readable=True, help="Second document.")

_TABLE_OPTION = typer.Option(
    False,
    "--table",
    help="Render a table instead of a language document.",
    show_default=False,
)


def register(app: typer.Typer) -> None:
    """Register the lang, member and equiv commands."""

    app.command("lang")(lang_command)
    app.command("member")(member_command)
    app.command("equiv")(equiv_command)


def lang_command(
    ctx: typer.Context,
    path: Path = PATH_ARGUMENT,
    bound: int | None = BOUND_OPTION,
    table: bool = _TABLE_OPTION,
    output: Path | None = OUTPUT_OPTION,
) -> None:
    """List the accepted ipomsets up to the bound as canonical literals."""

    cli_ctx = ctx.ensure_object(CLIContext)
    try:
        language = language_of(load(path), resolve_bound(bound))
        if table:
            cli_ctx.console.print(build_language_table(language))
            return
        emit(dump_model(language), output)
    except HdaForgeError as exc:
        fail(cli_ctx, exc, title="Enumeration failed")


def member_command(
    ctx: typer.Context,
    query: str = _QUERY_ARGUMENT,
    path: Path = PATH_ARGUMENT,
) -> None:
    """Decide whether the query ipomset is accepted; exit 1 when it is not."""

    cli_ctx = ctx.ensure_object(CLIContext)
    try:
        accepted = contains(load(path), parse_ipomset(query))
    except HdaForgeError as exc:
        fail(cli_ctx, exc, title="Membership failed")

    if accepted:
        typer.echo("member")
        return
    typer.echo("not a member")
    raise typer.Exit(code=EXIT_NEGATIVE)


def equiv_command(
    ctx: typer.Context,
    left: Path = _LEFT_ARGUMENT,
    right: Path = _RIGHT_ARGUMENT,
    bound: int | None = BOUND_OPTION,
) -> None:
    """Compare bounded languages; exit 1 and print a witness when they differ."""

    cli_ctx = ctx.ensure_object(CLIContext)
    try:
        chosen = resolve_bound(bound)
        result = lang_equiv(
            language_of(load(left), chosen), language_of(load(right), chosen), chosen
        )
    except HdaForgeError as exc:
        fail(cli_ctx, exc, title="Comparison failed")

    typer.echo(describe_equivalence(result))
    if not result.equal:
        raise typer.Exit(code=EXIT_NEGATIVE)


__all__ = ["equiv_command", "lang_command", "member_command", "register"]
