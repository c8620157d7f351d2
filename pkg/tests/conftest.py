import numpy as np
import pytest

# acceptance verdicts collected by test_acceptance.py, printed after the run
ACCEPTANCE_LINES = {}


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE_LINES, key=lambda s: int(s[1:])):
        terminalreporter.write_line(ACCEPTANCE_LINES[key])
