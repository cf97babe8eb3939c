"""Shared fixtures and deterministic hypothesis configuration."""

from __future__ import annotations

from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

from structlab.descsys import load_system

settings.register_profile(
    "structlab",
    deadline=None,
    derandomize=True,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("structlab")

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


@pytest.fixture(scope="session")
def fixa():
    """The tiny 2-bit reference system used throughout the suite."""
    return load_system(FIXTURES / "fixa.tsv")


@pytest.fixture(scope="session")
def fixtures_dir() -> Path:
    return FIXTURES
