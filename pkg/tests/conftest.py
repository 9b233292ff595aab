import pytest

from hermiwitt.padic import FieldConfig


@pytest.fixture(scope="session")
def cfg5():
    return FieldConfig(5, 32)


@pytest.fixture(scope="session")
def cfg3():
    return FieldConfig(3, 32)


@pytest.fixture(scope="session")
def cfg7():
    return FieldConfig(7, 32)
