from __future__ import annotations

import pytest

_LINES: dict[int, str] = {}


@pytest.fixture
def criterion():
    """Record one pass/fail line per acceptance criterion."""

    def record(number: int, ok: bool, detail: str, seconds: float):
        line = f"criterion {number:2d}: {'PASS' if ok else 'FAIL'}  {detail} ({seconds:.2f} s)"
        _LINES[number] = line
        print(line)
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if not _LINES:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_LINES):
        terminalreporter.write_line(_LINES[n])
