"""Helpers shared by the command modules: loading, bounds, output and failure exits."""

from __future__ import annotations

import logging
from pathlib import Path
from typing import NoReturn

import typer

from hdaforge.cli.app import CLIContext
from hdaforge.core.automaton import PAutomaton
from hdaforge.core.complex import Complex
from hdaforge.core.documents import Loaded, read_model
from hdaforge.core.exceptions import HdaForgeError, PreconditionViolated, ValidationError
from hdaforge.core.ipomset import Ipomset, canon, sparse_length
from hdaforge.core.kleene import eval_expr
from hdaforge.core.language import BoundedLanguage, enumerate_language, is_member
from hdaforge.ui.formatters import status_panel
from hdaforge.utils.settings import get_settings
from hdaforge.utils.validators import validate_bound

_LOGGER = logging.getLogger(__name__)

EXIT_NEGATIVE = 1
EXIT_INPUT_ERROR = 2

PATH_ARGUMENT = typer.Argument(
    ...,
    exists=True,
    dir_okay=False,
    readable=True,
    help="JSON document to read.",
)

BOUND_OPTION = typer.Option(
    None,
    "--bound",
    "-k",
    help=(
        "Keep accepted ipomsets whose sparse step decomposition has at most this many "
        "starters and terminators; not an event count (default: HDA_FORGE_BOUND or 6)."
    ),
)

OUTPUT_OPTION = typer.Option(
    None,
    "--output",
    "-o",
    dir_okay=False,
    help="Write the result to this file instead of stdout.",
)


def fail(cli_ctx: CLIContext, exc: HdaForgeError, *, title: str = "Error") -> NoReturn:
    cli_ctx.err_console.print(status_panel(str(exc), status="error", title=title))
    raise typer.Exit(code=EXIT_INPUT_ERROR) from exc


def resolve_bound(bound: int | None) -> int:
    return validate_bound(get_settings().bound if bound is None else bound)


def load(path: Path) -> Loaded:
    return read_model(path)


def load_complex(path: Path) -> Complex:
    model = read_model(path)
    if not isinstance(model, Complex):
        raise PreconditionViolated(f"{path} does not hold a complex document")
    return model


def load_recognizer(path: Path) -> Complex | PAutomaton:
    model = read_model(path)
    if not isinstance(model, Complex | PAutomaton):
        raise PreconditionViolated(f"{path} holds neither a complex nor an automaton")
    return model


def language_of(model: Loaded, bound: int) -> BoundedLanguage:
    """Bounded language of any document: enumerated, evaluated or restricted."""

    if isinstance(model, Complex | PAutomaton):
        return enumerate_language(model, bound)
    if isinstance(model, BoundedLanguage):
        if bound > model.bound and not model.exact:
            raise ValidationError(
                f"language document only covers bound {model.bound}, asked for {bound}"
            )
        return model.restricted(bound)
    return eval_expr(model, bound)


def contains(model: Loaded, ipomset: Ipomset) -> bool:
    if isinstance(model, Complex | PAutomaton):
        return is_member(model, ipomset)
    return canon(ipomset) in language_of(model, sparse_length(ipomset))


def emit(text: str, output: Path | None) -> None:
    if output is None:
        typer.echo(text, nl=False)
        return
    try:
        output.write_text(text, encoding="utf-8")
    except OSError as exc:
        raise ValidationError(f"cannot write {output}: {exc.strerror}") from exc
    _LOGGER.debug("Wrote %d bytes to %s", len(text), output)


__all__ = [
    "BOUND_OPTION",
    "EXIT_INPUT_ERROR",
    "EXIT_NEGATIVE",
    "OUTPUT_OPTION",
    "PATH_ARGUMENT",
    "contains",
    "emit",
    "fail",
    "language_of",
    "load",
    "load_complex",
    "load_recognizer",
    "resolve_bound",
]
