import pytest

from src import fixtures
from src.config import FIXTURES_DIR
from src.model import validate_channel


@pytest.fixture
def golden():
    return fixtures.golden_channel()


@pytest.fixture
def baseline_scheme():
    return fixtures.baseline_scheme()


@pytest.fixture
def improved_scheme():
    return fixtures.improved_scheme()


@pytest.fixture
def single_user():
    return validate_channel([[1]])


@pytest.fixture
def fixtures_dir():
    return FIXTURES_DIR
