import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from freecomm.words import RankContext, parse  # noqa: E402

ACCEPTANCE_LINES = []


@pytest.fixture
def f2():
    return RankContext.of("a b")


@pytest.fixture
def f3():
    return RankContext.of("a b c")


@pytest.fixture
def w(f2):
    return lambda text: parse(text, f2)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
