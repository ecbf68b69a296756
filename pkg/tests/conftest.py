from fractions import Fraction as F
from functools import lru_cache

import pytest

from jacquet.boundary import boundary_map
from jacquet.spherical import build_module


@lru_cache(maxsize=None)
def module(name, lam):
    return build_module(name, [F(x) for x in lam])


@lru_cache(maxsize=None)
def result(name, lam, K):
    return boundary_map(module(name, lam), K)


@pytest.fixture(scope="session")
def sl2r_generic():
    # lambda = (3/4) beta, so lambda(H) = 3/2
    return result("sl2r", ("3/4",), 10)


@pytest.fixture(scope="session")
def sl2r_resonant():
    # lambda = 2 beta, so lambda(H) = 4
    return result("sl2r", ("2",), 12)


@pytest.fixture(scope="session")
def sl3r_generic():
    return result("sl3r", ("5/2", "7/3"), 6)


@pytest.fixture(scope="session")
def sl2c_generic():
    return result("sl2c", ("3/5",), 8)


def pytest_terminal_summary(terminalreporter):
    from tests.test_acceptance import RESULTS

    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for n in sorted(RESULTS):
            terminalreporter.write_line(RESULTS[n])
