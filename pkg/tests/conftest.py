import sys
from pathlib import Path

import pytest

HERE = Path(__file__).parent
sys.path.insert(0, str(HERE))

FIXTURES = HERE / "fixtures"
PANEL = FIXTURES / "panel"
GOLDEN = FIXTURES / "golden"


@pytest.fixture
def panel_files():
    return sorted(PANEL.glob("*.csv"))


@pytest.fixture
def golden_dir():
    return GOLDEN


ACCEPTANCE_LINES = []


@pytest.fixture
def criterion(request):
    """Record one acceptance line: ``criterion(ok, detail)``."""

    def record(ok, detail=""):
        line = f"[{'PASS' if ok else 'FAIL'}] {request.node.name}: {detail}"
        ACCEPTANCE_LINES.append(line)
        print(line)
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
