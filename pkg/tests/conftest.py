import pytest
from hypothesis import settings

from mis_lab.counting import MisSpec
from mis_lab.subshift import SubshiftSpec

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")


@pytest.fixture
def golden():
    return SubshiftSpec.golden_mean()


@pytest.fixture
def mis23(golden):
    return MisSpec.make((2, 3), golden)


@pytest.fixture
def mis2(golden):
    return MisSpec.make((2,), golden)


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance") or sys.modules.get("tests.test_acceptance")
    lines = getattr(mod, "REPORT_LINES", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
