import numpy as np
import pytest

from gfaccess import code as cc


@pytest.fixture(scope="session")
def code323():
    return cc.build_code(3, 2, 3)


@pytest.fixture(scope="session")
def code323_g3(code323):
    return cc.assign_clusters(code323, 3)


@pytest.fixture(scope="session")
def code525_g4():
    # order G + 1 = 5 for G = 4 users
    return cc.assign_clusters(cc.build_code(5, 2, 5), 4)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


ACCEPTANCE_LINES = []


@pytest.fixture
def acceptance():
    """Record one PASS/FAIL line per acceptance criterion."""

    def record(number, ok, detail):
        line = f"criterion {number}: {'PASS' if ok else 'FAIL'}  {detail}"
        ACCEPTANCE_LINES.append(line)
        print(line)
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
