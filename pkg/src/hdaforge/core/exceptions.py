from __future__ import annotations

from collections.abc import Iterable


class HdaForgeError(Exception):
    """Base class for all hda-forge errors."""


class ValidationError(HdaForgeError):
    """Raised when user input (bounds, environment settings) fails validation."""


class InvalidIpomset(HdaForgeError):
    """Raised when ipomset data violates the structural rules."""


class NotInterval(InvalidIpomset):
    """Raised when the precedence order contains a 2+2 pattern."""


class InterfaceMismatch(HdaForgeError):
    """Raised when a target interface cannot be identified with a source interface."""

    def __init__(self, detail: str, *, position: int | None = None) -> None:
        self.detail = detail
        self.position = position
        super().__init__(self._build_message())

    def _build_message(self) -> str:
        if self.position is None:
            return f"interface mismatch: {self.detail}"
        return f"interface mismatch at step {self.position}: {self.detail}"


class BoundExceeded(HdaForgeError):
    """Raised when an exhaustive search is asked to go beyond its size limit."""


class UnknownCell(HdaForgeError):
    """Raised when a cell or state identifier does not exist."""


class IndexOutOfRange(HdaForgeError):
    """Raised when an event index set does not fit the conclist it refers to."""


class InvalidComplex(HdaForgeError):
    """Raised when complex data cannot even be assembled (dangling ids, bad typing)."""


class InvalidAutomaton(HdaForgeError):
    """Raised when automaton data violates state typing."""


class PreconditionViolated(HdaForgeError):
    """Raised when an operation is applied outside its domain."""


class NotReduced(PreconditionViolated):
    """Raised when a construction requires a reduced gST-automaton."""


class NotBadStarter(PreconditionViolated):
    """Raised when a transition selected for elimination is not a bad starter."""


class NotBadTerminator(PreconditionViolated):
    """Raised when a transition selected for elimination is not a bad terminator."""


class NotAnInclusionEdge(HdaForgeError):
    """Raised when widening is requested against the lattice direction."""


class NoTranslationPath(HdaForgeError):
    """Raised when no chain of translations connects two model kinds."""


class MergeUndefined(HdaForgeError):
    """Raised when two consecutive steps of a path have no composite face."""


class ExpressionSyntaxError(HdaForgeError):
    """Raised when expression or literal text cannot be parsed."""

    def __init__(self, message: str, *, text: str, position: int) -> None:
        self.text = text
        self.position = position
        super().__init__(f"{message} at position {position}: {text!r}")


class SchemaError(HdaForgeError):
    """Raised when a document does not match its schema."""

    def __init__(self, message: str, *, path: Iterable[str | int] = ()) -> None:
        self.path: tuple[str | int, ...] = tuple(path)
        self.detail = message
        super().__init__(self._build_message())

    def _build_message(self) -> str:
        if not self.path:
            return self.detail
        return f"{format_json_path(self.path)}: {self.detail}"


def format_json_path(path: Iterable[str | int]) -> str:
    """Render a location tuple as ``cells[2].ev``."""

    rendered = ""
    for part in path:
        if isinstance(part, int):
            rendered += f"[{part}]"
        else:
            rendered += f".{part}" if rendered else str(part)
    return rendered or "$"


__all__ = [
    "BoundExceeded",
    "ExpressionSyntaxError",
    "HdaForgeError",
    "IndexOutOfRange",
    "InterfaceMismatch",
    "InvalidAutomaton",
    "InvalidComplex",
    "InvalidIpomset",
    "MergeUndefined",
    "NoTranslationPath",
    "NotAnInclusionEdge",
    "NotBadStarter",
    "NotBadTerminator",
    "NotInterval",
    "NotReduced",
    "PreconditionViolated",
    "SchemaError",
    "UnknownCell",
    "ValidationError",
    "format_json_path",
]
