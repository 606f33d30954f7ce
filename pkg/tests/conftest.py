"""Pytest configuration for e8recog tests."""

from __future__ import annotations

import json
from pathlib import Path

import pytest

from e8recog.factorizer import FactorCache

SCHEMA_DIR = Path(__file__).parent.parent / "e8recog" / "schemas"


def pytest_addoption(parser: pytest.Parser) -> None:
    """Register --slow for the long acceptance runs."""
    parser.addoption(
        "--slow", action="store_true", default=False, help="run tests marked slow"
    )


def pytest_collection_modifyitems(
    config: pytest.Config, items: list[pytest.Item]
) -> None:
    """Skip slow tests unless --slow was given."""
    if config.getoption("--slow"):
        return
    skip_slow = pytest.mark.skip(reason="needs --slow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip_slow)


@pytest.fixture(scope="session")
def shared_cache() -> FactorCache:
    """In-memory factor cache shared by every test in the session."""
    return FactorCache()


@pytest.fixture
def cache_path(tmp_path: Path) -> Path:
    """Path for a throwaway cache file."""
    return tmp_path / "factor-cache.json"


@pytest.fixture(scope="session")
def load_schema():
    """Return a loader for the shipped JSON schemas."""

    def _load(name: str) -> dict:
        return json.loads((SCHEMA_DIR / f"{name}.schema.json").read_text(encoding="utf-8"))

    return _load
