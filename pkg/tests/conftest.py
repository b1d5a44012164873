import pytest

ACCEPTANCE = []


@pytest.fixture
def report():
    """Record one acceptance verdict line; printed again in the terminal summary."""
    def add(name, ok, detail):
        line = f"[{'PASS' if ok else 'FAIL'}] {name}: {detail}"
        print(line)
        ACCEPTANCE.append(line)
        return ok
    return add


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE:
            terminalreporter.write_line(line)
