import logging

import pytest
from faker import Faker

from app.config import get_settings

pytest_plugins = [
    "tests.fixtures.config_fixtures",
]

logger = logging.getLogger(__name__)
settings = get_settings()


@pytest.fixture(scope="function")
def faker():
    """Create a seeded Faker instance so generated inputs are reproducible."""
    fake = Faker()
    fake.seed_instance(20240611)
    return fake


@pytest.fixture(scope="function")
def out_dir(tmp_path):
    """Fresh output directory for commands that write files."""
    path = tmp_path / "out"
    path.mkdir()
    return path
