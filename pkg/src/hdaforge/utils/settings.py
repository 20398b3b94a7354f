from __future__ import annotations

import logging
import os
from collections.abc import Mapping
from functools import lru_cache

from pydantic import BaseModel, ConfigDict, Field
from pydantic import ValidationError as PydanticValidationError

from hdaforge.core.exceptions import ValidationError

_LOGGER = logging.getLogger(__name__)

SEED_VARIABLE = "HDA_FORGE_SEED"
BOUND_VARIABLE = "HDA_FORGE_BOUND"
DEFAULT_SEED = 20240601
DEFAULT_BOUND = 6


class ForgeSettings(BaseModel):
    """Process-wide knobs read from the environment."""

    model_config = ConfigDict(extra="forbid", frozen=True)

    seed: int = DEFAULT_SEED
    bound: int = Field(default=DEFAULT_BOUND, ge=0)


def load_settings(environ: Mapping[str, str] | None = None) -> ForgeSettings:
    """Build settings from ``environ`` (default: the process environment)."""

    source = os.environ if environ is None else environ
    values: dict[str, str] = {}
    if source.get(SEED_VARIABLE, "").strip():
        values["seed"] = source[SEED_VARIABLE].strip()
    if source.get(BOUND_VARIABLE, "").strip():
        values["bound"] = source[BOUND_VARIABLE].strip()
    try:
        settings = ForgeSettings.model_validate(values)
    except PydanticValidationError as exc:
        problems = "; ".join(
            f"{_variable_for(error['loc'])}: {error['msg']}" for error in exc.errors()
        )
        _LOGGER.debug("Rejecting environment settings: %s", problems)
        raise ValidationError(f"Invalid environment settings: {problems}") from exc
    _LOGGER.debug("Loaded settings seed=%s bound=%s", settings.seed, settings.bound)
    return settings


@lru_cache(maxsize=1)
def get_settings() -> ForgeSettings:
    return load_settings()


def _variable_for(location: tuple[int | str, ...]) -> str:
    field = str(location[0]) if location else ""
    return {"seed": SEED_VARIABLE, "bound": BOUND_VARIABLE}.get(field, field)


__all__ = [
    "BOUND_VARIABLE",
    "DEFAULT_BOUND",
    "DEFAULT_SEED",
    "ForgeSettings",
    "SEED_VARIABLE",
    "get_settings",
    "load_settings",
]
