import pytest

from wave_recover import PhysicalParams, make_grid, paper_pressure_trace


@pytest.fixture(scope="session")
def grid():
    return make_grid(4096, 30.0)


@pytest.fixture(scope="session")
def small_grid():
    return make_grid(1024, 30.0)


@pytest.fixture(scope="session")
def trace_p(grid):
    return paper_pressure_trace(grid)


@pytest.fixture(scope="session")
def default_params():
    return PhysicalParams(speed=2.0, depth=1.0)


def pytest_terminal_summary(terminalreporter):
    import sys

    module = sys.modules.get("test_acceptance")
    lines = getattr(module, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
