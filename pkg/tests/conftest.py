import numpy as np
import pytest

from gerbelab import su2geom


@pytest.fixture(scope="session")
def cal():
    return su2geom.calibrate(32)


@pytest.fixture()
def rng():
    return np.random.default_rng(1234)
