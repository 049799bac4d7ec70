import math
from pathlib import Path

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from qtstar.core import GalileanConfig
from qtstar.kernel import Grid1D

ROOT = Path(__file__).resolve().parents[1]
CONFIGS = ROOT / "configs"

settings.register_profile("qtstar", max_examples=25, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("qtstar")


@pytest.fixture
def desk():
    """Natural units: hbar = m = 1, alpha = 1, beta = 1/4, so tau = sigma_x = 1."""
    return GalileanConfig(hbar=1.0, alpha=1.0, beta=0.25)


@pytest.fixture
def grid():
    return Grid1D.centered(256, 16.0)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def rel(a, b):
    return abs(a - b) / abs(b)
