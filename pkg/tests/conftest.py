import pytest

from erdos_check import sieve_primes

from .acceptance_log import ACCEPTANCE_LINES


@pytest.fixture(scope="session")
def table_1e4():
    return sieve_primes(10**4)


@pytest.fixture(scope="session")
def table_1e5():
    return sieve_primes(10**5)


@pytest.fixture(scope="session")
def table_default():
    return sieve_primes(1_400_000)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
