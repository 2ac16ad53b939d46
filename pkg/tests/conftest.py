from __future__ import annotations

import pytest
from hypothesis import settings

from rauzy.ring import Params, solve_roots

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")

# lines collected by the acceptance module, echoed in the terminal summary
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def p32():
    return Params(3, -2)


@pytest.fixture(scope="session")
def r32(p32):
    return solve_roots(p32)


@pytest.fixture(scope="session")
def curve12():
    from rauzy.ifs32 import curve_samples

    return curve_samples(depth=18)
