"""Shared reporting for the acceptance suite.

Each acceptance test records one ``criterion N: PASS/FAIL`` line through
the ``criterion`` fixture; the lines are replayed in the terminal summary
so a full run ends with the verdict table regardless of output capture.
"""
import pytest

_lines: list[str] = []


@pytest.fixture
def criterion():
    def report(number: int, ok: bool, detail: str) -> None:
        line = f"criterion {number:2d}: {'PASS' if ok else 'FAIL'} - {detail}"
        _lines.append(line)
        print(line)
        assert ok, line

    return report


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if _lines:
        terminalreporter.section("acceptance criteria")
        for line in _lines:
            terminalreporter.write_line(line)
