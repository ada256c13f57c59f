import pytest

from cloudgate import load_repository


@pytest.fixture(scope="session")
def repo():
    return load_repository()
