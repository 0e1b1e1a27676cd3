import random
from fractions import Fraction as Fr

import pytest

from fockexp.modespace import build_mode_space


@pytest.fixture
def ms4():
    return build_mode_space(4, [2, 3, 4, 5], 1)


@pytest.fixture
def ms3():
    return build_mode_space(3, [2, 3, 4], 1)


@pytest.fixture
def ms2():
    return build_mode_space(2, [2, 3], 1)


@pytest.fixture
def rng():
    return random.Random(1234)


def rand_fr(rng, span=5):
    return Fr(rng.randint(-span, span), rng.randint(1, 4))


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for n in sorted(RESULTS):
            terminalreporter.write_line(RESULTS[n])
