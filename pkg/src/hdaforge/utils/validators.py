from __future__ import annotations

import logging

from hdaforge.core.exceptions import ValidationError

_LOGGER = logging.getLogger(__name__)


def validate_bound(bound: int) -> int:
    """Ensure an enumeration bound is a non-negative integer."""

    if isinstance(bound, bool) or not isinstance(bound, int):
        _LOGGER.debug("Rejecting non-integer bound: %r", bound)
        raise ValidationError("Bound must be an integer.")
    if bound < 0:
        _LOGGER.debug("Rejecting negative bound: %s", bound)
        raise ValidationError(f"Bound must be >= 0, got {bound}.")
    return bound


def validate_count(count: int, *, name: str, minimum: int = 0) -> int:
    """Validate sizes handed to the random generators."""

    if isinstance(count, bool) or not isinstance(count, int) or count < minimum:
        _LOGGER.debug("Rejecting %s=%r", name, count)
        raise ValidationError(f"{name} must be an integer >= {minimum}.")
    return count


__all__ = ["validate_bound", "validate_count"]
