from __future__ import annotations

from functools import lru_cache

from rich.console import Console
from rich.theme import Theme

_BASE_THEME = Theme(
    {
        "variant.member": "bold green",
        "variant.absent": "dim",
        "status.success": "bold green",
        "status.error": "bold red",
        "status.warning": "yellow",
        "status.info": "bright_white",
        "title": "bold white",
    }
)


@lru_cache(maxsize=1)
def get_theme() -> Theme:
    """Return the shared Rich theme for the CLI."""

    return _BASE_THEME


def create_console(*, no_color: bool = False, stderr: bool = False) -> Console:
    """Create a Rich console configured with the hda-forge theme."""

    color_system = None if no_color else "auto"
    return Console(theme=get_theme(), color_system=color_system, highlight=False, stderr=stderr)


__all__ = ["create_console", "get_theme"]
