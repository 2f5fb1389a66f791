"""Shared pytest fixtures for tests."""

import os
from pathlib import Path

# Set environment variables before importing application modules
os.environ.setdefault("ENVIRONMENT", "test")
os.environ.setdefault("LOG_LEVEL", "DEBUG")
os.environ.setdefault("CHECK_EVERY_STEP", "true")

import pytest

from tests.corpus import Instance, instance

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture
def fixtures_dir() -> Path:
    """Directory holding sample documents."""
    return FIXTURES


@pytest.fixture
def worked() -> Instance:
    """The one-step example: ``∃y P(c, y)`` proved from ``∀x P(x, f(x))``."""
    return instance("worked")


@pytest.fixture
def worked_file(tmp_path: Path) -> Path:
    """A writable copy of the worked example document."""
    target = tmp_path / "worked.dsk"
    target.write_text((FIXTURES / "worked.dsk").read_text(encoding="utf-8"), encoding="utf-8")
    return target
