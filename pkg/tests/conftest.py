from __future__ import annotations

from collections.abc import Callable
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

from hdaforge.core.automaton import PAutomaton
from hdaforge.core.complex import Complex
from hdaforge.core.documents import Loaded, read_model
from hdaforge.utils.settings import get_settings

FIXTURES = Path(__file__).parent / "fixtures"

settings.register_profile(
    "hda-forge",
    derandomize=True,
    max_examples=40,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("hda-forge")


@pytest.fixture(autouse=True)
def _fresh_settings():
    get_settings.cache_clear()
    yield
    get_settings.cache_clear()


@pytest.fixture
def fixture_path() -> Callable[[str], Path]:
    def resolve(name: str) -> Path:
        return FIXTURES / f"{name}.json"

    return resolve


@pytest.fixture
def load_fixture(fixture_path: Callable[[str], Path]) -> Callable[[str], Loaded]:
    def load(name: str) -> Loaded:
        return read_model(fixture_path(name))

    return load


@pytest.fixture
def complex_fixture(load_fixture: Callable[[str], Loaded]) -> Callable[[str], Complex]:
    def load(name: str) -> Complex:
        model = load_fixture(name)
        assert isinstance(model, Complex)
        return model

    return load


@pytest.fixture
def automaton_fixture(load_fixture: Callable[[str], Loaded]) -> Callable[[str], PAutomaton]:
    def load(name: str) -> PAutomaton:
        model = load_fixture(name)
        assert isinstance(model, PAutomaton)
        return model

    return load


@pytest.fixture
def seed() -> int:
    return get_settings().seed
