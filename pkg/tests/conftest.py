import pytest

from hiddenorder import generators as gen

ACCEPTANCE_LINES = []


@pytest.fixture(scope="session")
def acceptance_log():
    return ACCEPTANCE_LINES


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def logistic_10k():
    return gen.logistic_series(0.123, 4.0, 10_000)


@pytest.fixture(scope="session")
def henon_x_50k():
    return gen.henon_series(0.0, 0.0, gen.MapParams(), 50_000)[0]


@pytest.fixture(scope="session")
def lorenz_50k():
    return gen.lorenz_series((1.0, 1.0, 1.0), gen.LorenzParams(), 50_000)
