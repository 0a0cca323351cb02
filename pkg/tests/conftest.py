import pytest

ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for line in ACCEPTANCE_LINES:
        terminalreporter.write_line(line)
    failed = sum(1 for line in ACCEPTANCE_LINES if line.startswith("FAIL"))
    terminalreporter.write_line(f"{len(ACCEPTANCE_LINES) - failed} passed, {failed} failed")


@pytest.fixture
def acceptance():
    """Record one PASS/FAIL line and assert on it."""

    def check(label: str, ok: bool, detail: str = "") -> None:
        line = f"{'PASS' if ok else 'FAIL'}  {label}" + (f"  [{detail}]" if detail else "")
        ACCEPTANCE_LINES.append(line)
        print(line)
        assert ok, line

    return check
