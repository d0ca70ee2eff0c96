import pytest

from kirwanres import load_fixture


@pytest.fixture(scope="session")
def cp1():
    return load_fixture("cp1")


@pytest.fixture(scope="session")
def cp2():
    return load_fixture("cp2")


@pytest.fixture(scope="session")
def chain():
    return load_fixture("cp1xcp1_stages")
