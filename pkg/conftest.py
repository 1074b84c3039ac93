import numpy as np
import pytest

from src.core.config_manager import get_config, set_config
from src.core.su3_algebra import random_special_unitary
from src.utils.logger import Logger

SEEDS = [0, 1, 2, 3, 4]


@pytest.fixture(params=SEEDS)
def rng(request):
    return np.random.default_rng(request.param)


@pytest.fixture
def random_su3(rng):
    """Factory for random SU(3) elements drawn from the seeded generator."""
    def make(scale: float = 1.0):
        return random_special_unitary(rng, scale)
    return make


@pytest.fixture(autouse=True)
def isolated_state():
    previous = get_config()
    yield
    set_config(previous)
    Logger.set_verbose(False)
    Logger.set_job(None)
