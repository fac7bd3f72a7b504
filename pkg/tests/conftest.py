from functools import lru_cache

import pytest

from ddforge.design import build_design
from ddforge.klein import KleinModel
from ddforge.ring import RingSpec


@lru_cache(maxsize=None)
def ring(q, m):
    return RingSpec.build(q, m)


@lru_cache(maxsize=None)
def design(q, m):
    return build_design(ring(q, m))


@lru_cache(maxsize=None)
def model(q, m):
    return KleinModel(design(q, m).line)


@pytest.fixture
def R42():
    return ring(4, 2)


@pytest.fixture
def D42():
    return design(4, 2)


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
