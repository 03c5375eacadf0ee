import pytest

_LINES = []


@pytest.fixture
def criterion():
    """Record one [PASS]/[FAIL] line per release-gate check, then assert.

    Lines are echoed in a terminal-summary section so they survive output
    capture and appear once per run, in criterion order.
    """

    def _report(num: int, label: str, failures: list) -> None:
        status = "FAIL" if failures else "PASS"
        detail = "" if not failures else " -- " + "; ".join(failures)
        line = f"[{status}] criterion {num}: {label}{detail}"
        _LINES.append(line)
        print(line)
        assert not failures, line

    return _report


def pytest_terminal_summary(terminalreporter):
    if _LINES:
        terminalreporter.section("acceptance criteria")
        for line in _LINES:
            terminalreporter.write_line(line)
