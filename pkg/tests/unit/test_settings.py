from __future__ import annotations

import pytest

from hdaforge.core.exceptions import ValidationError
from hdaforge.utils.settings import (
    DEFAULT_BOUND,
    DEFAULT_SEED,
    get_settings,
    load_settings,
)
from hdaforge.utils.validators import validate_bound, validate_count


def test_defaults_apply_without_environment() -> None:
    settings = load_settings({})

    assert settings.seed == DEFAULT_SEED
    assert settings.bound == DEFAULT_BOUND


def test_environment_overrides_defaults() -> None:
    settings = load_settings({"HDA_FORGE_SEED": " 7 ", "HDA_FORGE_BOUND": "3"})

    assert settings.seed == 7
    assert settings.bound == 3


def test_blank_values_fall_back_to_defaults() -> None:
    assert load_settings({"HDA_FORGE_BOUND": "  "}).bound == DEFAULT_BOUND


@pytest.mark.parametrize(
    "environ,variable",
    [
        ({"HDA_FORGE_SEED": "many"}, "HDA_FORGE_SEED"),
        ({"HDA_FORGE_BOUND": "-1"}, "HDA_FORGE_BOUND"),
    ],
)
def test_bad_values_name_the_variable(environ: dict[str, str], variable: str) -> None:
    with pytest.raises(ValidationError) as excinfo:
        load_settings(environ)

    assert variable in str(excinfo.value)


def test_get_settings_reads_the_process_environment(monkeypatch) -> None:
    monkeypatch.setenv("HDA_FORGE_BOUND", "9")

    assert get_settings().bound == 9
    assert get_settings() is get_settings()


@pytest.mark.parametrize("value", [-1, True, 2.5, "3"])
def test_validate_bound_rejects_non_counts(value) -> None:
    with pytest.raises(ValidationError):
        validate_bound(value)


def test_validate_bound_accepts_zero() -> None:
    assert validate_bound(0) == 0


def test_validate_count_honours_the_minimum() -> None:
    assert validate_count(1, name="depth", minimum=1) == 1
    with pytest.raises(ValidationError, match="depth must be an integer >= 1"):
        validate_count(0, name="depth", minimum=1)
