import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from halfstreet import equity

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(scope="session")
def flop_tables():
    return equity.build_equity_tables(3, "exact")


@pytest.fixture(scope="session")
def flop_file(flop_tables, tmp_path_factory):
    path = tmp_path_factory.mktemp("equity") / "flop3.json"
    equity.save_tables(flop_tables, path)
    return path


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
