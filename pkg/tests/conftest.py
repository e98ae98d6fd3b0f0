import pytest

from src.algebra.finite_field import circle_for_q, field_for_q
from src.group.group_action import close_group
from src.report.checks import Workspace
from src.utils.config import Settings


@pytest.fixture(scope="session")
def ctx16():
    return field_for_q(16)


@pytest.fixture(scope="session")
def ctx32():
    return field_for_q(32)


@pytest.fixture(scope="session")
def circle16():
    return circle_for_q(16)


@pytest.fixture(scope="session")
def circle32():
    return circle_for_q(32)


@pytest.fixture(scope="session")
def group16(circle16):
    return close_group(circle16)


@pytest.fixture(scope="session")
def group32(circle32):
    return close_group(circle32)


@pytest.fixture
def settings(tmp_path):
    return Settings(output_dir=str(tmp_path), jobs=1)


@pytest.fixture(scope="session")
def workspace():
    """Shared across modules so q=16 block sets are built once."""
    return Workspace(Settings(jobs=1))
