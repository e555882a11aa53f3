import pytest

_ACCEPTANCE = {}


@pytest.fixture
def report():
    """Record one acceptance line: report(index, title, checks) with checks = [(name, ok, detail)]."""

    def record(index, title, checks):
        ok = all(c[1] for c in checks)
        detail = "; ".join(f"{name} {'ok' if good else 'FAILED'} ({info})" for name, good, info in checks)
        _ACCEPTANCE[index] = f"{'PASS' if ok else 'FAIL'} [{index:2d}] {title}: {detail}"
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance")
    for index in sorted(_ACCEPTANCE):
        terminalreporter.write_line(_ACCEPTANCE[index])
