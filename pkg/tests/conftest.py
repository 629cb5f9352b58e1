import pytest

# criterion number -> (passed, detail, seconds); filled by tests/test_acceptance.py
ACCEPTANCE: dict[int, tuple[bool, str, float]] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(ACCEPTANCE):
        ok, detail, secs = ACCEPTANCE[num]
        terminalreporter.write_line(f"criterion {num:>2}: {'PASS' if ok else 'FAIL'}  ({secs:.1f}s)  {detail}")


@pytest.fixture
def record():
    def _record(num, ok, detail, seconds):
        ACCEPTANCE[num] = (bool(ok), detail, seconds)
        return ok

    return _record
