import pytest

from tzl.sieve import build_sieve


@pytest.fixture(scope="session")
def small_table():
    return build_sieve(10**4 + 300, 4096)


@pytest.fixture(scope="session")
def table_1e5():
    return build_sieve(10**5 + 300)


@pytest.fixture(scope="session")
def table_1e6():
    return build_sieve(10**6 + 300)


@pytest.fixture(scope="session")
def table_1e7():
    return build_sieve(10**7 + 300)


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import RESULTS

    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
