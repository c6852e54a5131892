import numpy as np
import pytest

from quadfloat import VehicleParams


@pytest.fixture
def params():
    return VehicleParams()


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)
