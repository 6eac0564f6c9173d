import pytest

_RESULTS = {}


@pytest.fixture
def acceptance():
    """Record one acceptance line: acceptance(number, passed, detail)."""
    def record(number, passed, detail):
        _RESULTS[number] = (passed, detail)
    return record


def pytest_terminal_summary(terminalreporter):
    if not _RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_RESULTS):
        passed, detail = _RESULTS[number]
        terminalreporter.write_line(f"criterion {number:>2}: {'PASS' if passed else 'FAIL'}  {detail}")
