from fractions import Fraction

import pytest
from hypothesis import settings

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")


def F(s):
    return Fraction(s)


@pytest.fixture
def bsc():
    def make(eps, exact=False):
        e = Fraction(eps) if exact else float(eps)
        return [[1 - e, e], [e, 1 - e]]
    return make


def pytest_terminal_summary(terminalreporter):
    mod = __import__("sys").modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
