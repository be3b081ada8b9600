import pytest

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def report():
    """Record one PASS/FAIL line; echoed in the terminal summary."""
    def _report(number: int, title: str, ok: bool, detail: str) -> bool:
        line = f"{'PASS' if ok else 'FAIL'} criterion {number}: {title} ({detail})"
        print(line)
        ACCEPTANCE_LINES.append(line)
        return ok
    return _report


@pytest.fixture
def note():
    """Record an informational line (verdicts) for the terminal summary."""
    def _note(line: str) -> None:
        print(line)
        ACCEPTANCE_LINES.append(line)
    return _note


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
