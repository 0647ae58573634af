import pytest

from helpers import R3, frob_example1, frob_example2


@pytest.fixture
def R():
    return R3


@pytest.fixture
def frob1():
    return frob_example1()


@pytest.fixture
def frob2():
    return frob_example2()


def pytest_terminal_summary(terminalreporter):
    from acceptance_log import LINES

    if LINES:
        terminalreporter.section("acceptance criteria")
        for line in LINES:
            terminalreporter.write_line(line)
