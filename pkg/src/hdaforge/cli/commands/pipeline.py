from __future__ import annotations

import logging
from pathlib import Path

import typer

from hdaforge.cli.app import CLIContext
from hdaforge.cli.support import (
    BOUND_OPTION,
    EXIT_NEGATIVE,
    OUTPUT_OPTION,
    PATH_ARGUMENT,
    emit,
    fail,
    load,
    load_complex,
    load_recognizer,
    resolve_bound,
)
from hdaforge.core.automaton import PAutomaton, bad_transition_counts, reduce
from hdaforge.core.complex import Complex
from hdaforge.core.determinize import det, is_deterministic
from hdaforge.core.documents import dump_model
from hdaforge.core.exceptions import HdaForgeError, PreconditionViolated
from hdaforge.core.kleene import RationalExpr, compile_expr, extract
from hdaforge.core.language import lang_equiv
from hdaforge.core.parser import format_expr, parse_expr
from hdaforge.core.translate import ModelKind, convert
from hdaforge.ui.formatters import describe_determinism, describe_equivalence

_LOGGER = logging.getLogger(__name__)

_CHECK_OPTION = typer.Option(
    False,
    "--check",
    help="Re-check determinism and bounded language equality of the result.",
    show_default=False,
)

_EXPRESSION_ARGUMENT = typer.Argument(
    ...,
    help="Rational expression text, or a path to an expression document.",
)

_DOCUMENT_OPTION = typer.Option(
    False,
    "--document",
    help="Print an expression document instead of the bare expression.",
    show_default=False,
)


def register(app: typer.Typer) -> None:
    """Register the reduce, determinize, compile and extract commands."""

    app.command("reduce")(reduce_command)
    app.command("determinize")(determinize_command)
    app.command("compile")(compile_command)
    app.command("extract")(extract_command)


def reduce_command(
    ctx: typer.Context,
    path: Path = PATH_ARGUMENT,
    output: Path | None = OUTPUT_OPTION,
) -> None:
    """Turn an automaton (or the ST-automaton of a complex) into a reduced gST-automaton."""

    cli_ctx = ctx.ensure_object(CLIContext)
    try:
        model = load_recognizer(path)
        automaton = model if isinstance(model, PAutomaton) else convert(model, ModelKind.STA)
        counts = bad_transition_counts(automaton)
        _LOGGER.debug("Input has %d bad transitions", counts.total)
        emit(dump_model(reduce(automaton)), output)
    except HdaForgeError as exc:
        fail(cli_ctx, exc, title="Reduction failed")


def determinize_command(
    ctx: typer.Context,
    path: Path = PATH_ARGUMENT,
    check: bool = _CHECK_OPTION,
    bound: int | None = BOUND_OPTION,
    output: Path | None = OUTPUT_OPTION,
) -> None:
    """Build the deterministic partial HDA of macro-states."""

    cli_ctx = ctx.ensure_object(CLIContext)
    try:
        source = load_complex(path)
        result = det(source)
        emit(dump_model(result), output)
        if not check:
            return
        report = is_deterministic(result)
        equivalence = lang_equiv(source, result, resolve_bound(bound))
    except HdaForgeError as exc:
        fail(cli_ctx, exc, title="Determinization failed")

    for line in [*describe_determinism(report), describe_equivalence(equivalence)]:
        typer.echo(line, err=True)
    if not report.deterministic or not equivalence.equal:
        raise typer.Exit(code=EXIT_NEGATIVE)


def compile_command(
    ctx: typer.Context,
    expression: str = _EXPRESSION_ARGUMENT,
    output: Path | None = OUTPUT_OPTION,
) -> None:
    """Compile a rational expression into a partial HDA document."""

    cli_ctx = ctx.ensure_object(CLIContext)
    try:
        emit(dump_model(compile_expr(_expression_from(expression))), output)
    except HdaForgeError as exc:
        fail(cli_ctx, exc, title="Compilation failed")


def extract_command(
    ctx: typer.Context,
    path: Path = PATH_ARGUMENT,
    document: bool = _DOCUMENT_OPTION,
    output: Path | None = OUTPUT_OPTION,
) -> None:
    """Print a rational expression for the language of a complex or automaton."""

    cli_ctx = ctx.ensure_object(CLIContext)
    try:
        model = load_recognizer(path)
        complex_ = model if isinstance(model, Complex) else convert(model, ModelKind.PHDA)
        expr = extract(complex_)
        emit(dump_model(expr) if document else format_expr(expr) + "\n", output)
    except HdaForgeError as exc:
        fail(cli_ctx, exc, title="Extraction failed")


def _expression_from(text: str) -> RationalExpr:
    candidate = Path(text)
    if text.endswith(".json") and candidate.is_file():
        model = load(candidate)
        if not isinstance(model, RationalExpr):
            raise PreconditionViolated(f"{candidate} does not hold an expression document")
        return model
    return parse_expr(text)


__all__ = [
    "compile_command",
    "determinize_command",
    "extract_command",
    "reduce_command",
    "register",
]
