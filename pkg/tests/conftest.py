import pytest

from highgirth import build_base_graph


@pytest.fixture(scope="session")
def g4():
    return build_base_graph(1)


@pytest.fixture(scope="session")
def g8():
    return build_base_graph(2)


@pytest.fixture(scope="session")
def g12():
    return build_base_graph(3)
