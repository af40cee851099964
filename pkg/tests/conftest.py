import pytest


def pytest_configure(config):
    config._acceptance = {}


@pytest.fixture
def criterion(request):
    """Record one acceptance line: ``criterion(n, title, ok, detail)``."""
    def record(n, title, ok, detail=""):
        line = f"criterion {n} [{title}]: {'PASS' if ok else 'FAIL'}" + (f" ({detail})" if detail else "")
        request.config._acceptance[n] = line
        print(line)
        return ok
    return record


def pytest_terminal_summary(terminalreporter, config):
    lines = getattr(config, "_acceptance", {})
    if not lines:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(lines):
        terminalreporter.write_line(lines[n])
