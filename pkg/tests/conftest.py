"""Shared fixtures."""

from typing import Iterator

import numpy as np
import pytest

from src.config import TOLERANCE_ENV
from src.utils.logging import LOG_LEVEL_ENV


@pytest.fixture(autouse=True)
def clean_environment(monkeypatch: pytest.MonkeyPatch) -> Iterator[None]:
    """Run every test without tolerance or log-level overrides."""
    monkeypatch.delenv(TOLERANCE_ENV, raising=False)
    monkeypatch.delenv(LOG_LEVEL_ENV, raising=False)
    yield


@pytest.fixture
def rng() -> np.random.Generator:
    """Seeded random generator."""
    return np.random.default_rng(20240611)
