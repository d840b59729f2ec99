import pytest

_CRITERIA: dict[int, tuple[str, str, str]] = {}


@pytest.fixture
def criterion():
    """Record one acceptance line: ``criterion(n, title, passed, detail)``.

    ``passed`` may be True, False or None (informational).
    """

    def record(number, title, passed, detail=""):
        status = {True: "PASS", False: "FAIL", None: "N/A"}[passed]
        _CRITERIA[number] = (status, title, detail)

    return record


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_CRITERIA):
        status, title, detail = _CRITERIA[number]
        terminalreporter.write_line(f"[{status}] criterion {number}: {title}")
        for line in detail.splitlines():
            terminalreporter.write_line(f"        {line}")
