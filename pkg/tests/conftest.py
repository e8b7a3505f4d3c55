import random

import pytest

from toric_angles import fixtures


def pytest_addoption(parser):
    parser.addoption("--seed", type=int, default=20240611, help="seed for randomized tests")


@pytest.fixture
def seed(request):
    return request.config.getoption("--seed")


@pytest.fixture
def rng(seed):
    return random.Random(seed)


@pytest.fixture(scope="session")
def cones():
    return {name: fx.cone() for name, fx in fixtures.FIXTURES.items()}

