from __future__ import annotations

import logging
from pathlib import Path

import typer

from hdaforge.cli.app import CLIContext
from hdaforge.cli.support import OUTPUT_OPTION, PATH_ARGUMENT, emit, fail, load_recognizer
from hdaforge.core.documents import dump_model
from hdaforge.core.exceptions import HdaForgeError
from hdaforge.core.translate import ModelKind, convert, model_kind, translation_path

_LOGGER = logging.getLogger(__name__)

_TO_OPTION = typer.Option(
    ...,
    "--to",
    help="Target variant or automaton class.",
    case_sensitive=False,
)

_FROM_OPTION = typer.Option(
    None,
    "--from",
    help="Read the input as this kind instead of its own tag or class.",
    case_sensitive=False,
)


def register(app: typer.Typer) -> None:
    """Register the convert command with the shared Typer application."""

    app.command("convert")(convert_command)


def convert_command(
    ctx: typer.Context,
    path: Path = PATH_ARGUMENT,
    target: ModelKind = _TO_OPTION,
    source: ModelKind | None = _FROM_OPTION,
    output: Path | None = OUTPUT_OPTION,
) -> None:
    """Translate along the shortest chain of language-preserving constructions."""

    cli_ctx = ctx.ensure_object(CLIContext)
    try:
        model = load_recognizer(path)
        start = source or model_kind(model)
        chain = translation_path(start, target)
        _LOGGER.debug("Translation chain: %s", " -> ".join(kind.value for kind in chain))
        emit(dump_model(convert(model, target, source=start)), output)
    except HdaForgeError as exc:
        fail(cli_ctx, exc, title="Conversion failed")


__all__ = ["convert_command", "register"]
