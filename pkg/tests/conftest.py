import pytest

from globkit import coherator as coh


@pytest.fixture(scope="session")
def std4():
    return coh.stdlib(4)


@pytest.fixture(scope="session")
def std3():
    return coh.stdlib(3)
