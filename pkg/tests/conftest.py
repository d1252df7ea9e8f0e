"""Pytest configuration and fixtures."""

import random
import shutil
import tempfile
from pathlib import Path
from typing import Callable, Generator, Sequence, Tuple

import pytest

from core.monomial import GeneratorContext
from core.presets import series_context, transseries_context
from core.series import Series
from tests.helpers import random_exact_series

SeriesFactory = Callable[..., Series]


@pytest.fixture
def temp_dir() -> Generator[Path, None, None]:
    """Create a temporary directory for tests."""
    temp_path = Path(tempfile.mkdtemp())
    yield temp_path
    shutil.rmtree(temp_path)


@pytest.fixture
def isolated_home(temp_dir: Path, monkeypatch: pytest.MonkeyPatch) -> Path:
    """Run with an empty home and working directory and no HAHN_* variables."""
    monkeypatch.setenv("HOME", str(temp_dir))
    monkeypatch.chdir(temp_dir)
    for name in ("HAHN_PRESET", "HAHN_C", "HAHN_OUTPUT", "HAHN_DEPTH", "HAHN_PRECISION"):
        monkeypatch.delenv(name, raising=False)
    return temp_dir


@pytest.fixture
def series_ctx() -> GeneratorContext:
    """The ``series`` preset: one plain generator t."""
    return series_context()


@pytest.fixture
def trans_ctx() -> GeneratorContext:
    """A fresh ``transseries(0)`` context: E = e^{-x}, X = 1/x."""
    return transseries_context(0)


@pytest.fixture
def rng() -> random.Random:
    """Seeded generator so randomized suites are reproducible."""
    return random.Random(20240611)


@pytest.fixture
def random_series(rng: random.Random) -> SeriesFactory:
    """Factory for exact random series in a context, sharing the seeded rng."""

    def factory(
        context: GeneratorContext,
        exponent_ranges: Sequence[Tuple[int, int]],
        max_terms: int = 4,
        min_terms: int = 1,
    ) -> Series:
        return random_exact_series(context, rng, exponent_ranges, max_terms, min_terms)

    return factory
