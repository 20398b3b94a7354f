"""Namespace for hda-forge Typer subcommands."""

from __future__ import annotations

import typer

from hdaforge.cli.commands.convert import register as register_convert_command
from hdaforge.cli.commands.inspection import register as register_inspection_commands
from hdaforge.cli.commands.language import register as register_language_commands
from hdaforge.cli.commands.pipeline import register as register_pipeline_commands


def register_commands(app: typer.Typer) -> None:
    """Register all Typer commands with the application instance."""

    register_inspection_commands(app)
    register_convert_command(app)
    register_language_commands(app)
    register_pipeline_commands(app)


__all__ = ["register_commands"]
