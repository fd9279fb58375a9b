from __future__ import annotations

import pytest

_LINES: list = []


@pytest.fixture
def verdict():
    """Record one acceptance line; the summary prints them all after the run."""

    def record(line: str) -> None:
        print(line)
        _LINES.append(line)

    return record


def pytest_terminal_summary(terminalreporter):
    if _LINES:
        terminalreporter.section("acceptance")
        for line in _LINES:
            terminalreporter.write_line(line)
