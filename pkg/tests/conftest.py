from fractions import Fraction

import pytest

from pointdyn.systems import DoublingCircle, DoublingRay, FullShift, OneSidedShift, SquaringMap


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance: one check per acceptance criterion")


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import RESULTS, format_line

    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for number in sorted(RESULTS):
            terminalreporter.write_line(format_line(number))


@pytest.fixture
def shift():
    return FullShift(2)


@pytest.fixture
def one_sided():
    return OneSidedShift(2)


@pytest.fixture
def circle():
    return DoublingCircle()


@pytest.fixture
def ray():
    return DoublingRay()


@pytest.fixture
def squaring():
    return SquaringMap()


@pytest.fixture
def half():
    return Fraction(1, 2)
