import pytest

ACCEPTANCE = []


@pytest.fixture
def report():
    """Record one acceptance line; the assertion stays in the test."""

    def record(label, ok, detail=""):
        line = f"{'PASS' if ok else 'FAIL'} {label}" + (f": {detail}" if detail else "")
        ACCEPTANCE.append(line)
        print(line)
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE, key=_order):
            terminalreporter.write_line(line)


def _order(line):
    parts = line.split()
    return (0, int(parts[2].rstrip(":"))) if parts[1] == "criterion" and parts[2].rstrip(":").isdigit() else (1, 0)
