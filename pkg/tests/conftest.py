import pytest

from deltagraph import builders


@pytest.fixture
def chain():
    return builders.single_chain(2)


@pytest.fixture
def dchain():
    return builders.double_chain(2, 3)


@pytest.fixture
def grid23():
    return builders.grid(2, 3)


@pytest.fixture
def cycle3():
    return builders.cycle(3, 2)


@pytest.fixture
def cycle4_flat():
    return builders.cycle(4, 1)


@pytest.fixture
def deformed():
    return builders.deformed_chain(1.05, 0.3)
