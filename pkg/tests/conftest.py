import pytest

from tcmsizer.models import default_bundle

ACCEPTANCE_LINES = []


@pytest.fixture(scope="session")
def bundle():
    return default_bundle()


@pytest.fixture
def acceptance_report():
    return ACCEPTANCE_LINES


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)
