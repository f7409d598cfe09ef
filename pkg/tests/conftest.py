import pytest

_lines = {}


@pytest.fixture
def acceptance():
    """Record one PASS/FAIL line for a numbered criterion, then assert it."""

    def record(number, title, ok, detail, elapsed, limit):
        in_time = elapsed < limit
        status = "PASS" if ok and in_time else "FAIL"
        line = f"{status} criterion {number:>2}: {title} ({detail}; {elapsed:.2f}s of {limit:g}s)"
        _lines[number] = line
        print(line)
        assert ok, line
        assert in_time, line

    return record


def pytest_terminal_summary(terminalreporter):
    if not _lines:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_lines):
        terminalreporter.write_line(_lines[number])
