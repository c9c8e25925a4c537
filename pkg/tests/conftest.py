import numpy as np
import pytest

from twospinor.dirac import default_gamma_set

# lines reported by the acceptance suite, echoed again in the terminal summary
ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture(scope="session")
def g():
    return default_gamma_set()


@pytest.fixture
def report():
    def _report(line: str) -> None:
        print(line)
        ACCEPTANCE_LINES.append(line)

    return _report


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
