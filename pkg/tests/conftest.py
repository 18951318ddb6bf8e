import sys
from pathlib import Path

import pytest

# the loop-based reference implementations live next to the tests
sys.path.insert(0, str(Path(__file__).parent))


def pytest_configure(config):
    config._acceptance_lines = []


@pytest.fixture()
def record_criterion(request):
    """Log one PASS/FAIL line per acceptance criterion for the terminal summary."""
    def record(number, ok, detail):
        line = f"criterion {number:>2}: {'PASS' if ok else 'FAIL'}  {detail}"
        request.config._acceptance_lines.append(line)
        print(line)
        return ok
    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = getattr(config, "_acceptance_lines", [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines):
            terminalreporter.write_line(line)
