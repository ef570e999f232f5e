"""Shared test fixtures."""

import os

import numpy as np
import pytest

from sigdev.paths import Path, one_variation

J1_OF_2 = 0.5767248077568734  # J₁(2)
I0_OF_2 = 2.2795853023360673  # Σ 1/(m!)²


def random_path(seed: int, dim: int = 2, segments: int = 8, variation: float = 1.0) -> Path:
    """Piecewise-linear path from the origin on [0, 1], rescaled to the given 1-variation."""
    steps = np.random.default_rng(seed).standard_normal((segments, dim))
    points = np.vstack([np.zeros((1, dim)), np.cumsum(steps, axis=0)])
    path = Path.from_points(points)
    return Path.from_points(points * variation / one_variation(path))


@pytest.fixture(autouse=True)
def _clean_env(monkeypatch: pytest.MonkeyPatch) -> None:
    for key in list(os.environ):
        if key.startswith("SIGDEV_"):
            monkeypatch.delenv(key)


@pytest.fixture
def unit_line() -> Path:
    """γ_t = t on [0, 1], d = 1."""
    return Path.line([1.0])


@pytest.fixture
def origin_2d() -> Path:
    return Path.constant([0.0, 0.0])


@pytest.fixture
def short_paths() -> list[Path]:
    """Ten d=2 paths of 1-variation 0.4: the series oracle reaches 1e-8 on their concatenations."""
    return [random_path(seed, variation=0.4) for seed in range(10)]
