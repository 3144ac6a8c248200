from pathlib import Path

import numpy as np
import pytest

from box_io import load_box

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"

TOL = 1e-12
SQRT2 = np.sqrt(2.0)


@pytest.fixture
def fixtures_dir() -> Path:
    return FIXTURES


@pytest.fixture
def fixture_box():
    def load(name: str):
        return load_box(FIXTURES / f"{name}.json")
    return load


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)
