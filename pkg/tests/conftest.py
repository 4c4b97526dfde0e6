from functools import lru_cache
from pathlib import Path

import pytest

from tropaz.pipeline import Pipeline

FIXTURES = Path(__file__).parent / "fixtures"


@lru_cache(maxsize=None)
def pipeline(name: str) -> Pipeline:
    return Pipeline(FIXTURES / f"{name}.json")


@pytest.fixture
def ex1():
    return pipeline("ex1")


@pytest.fixture
def g22():
    return pipeline("generic22")


@pytest.fixture
def twomax():
    return pipeline("twomax22")


# one line per acceptance criterion, printed after the run
ACCEPTANCE_LINES = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[n])
