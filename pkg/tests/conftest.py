import pytest

from pqsurf.groups import load_catalog

ACCEPTANCE: dict = {}


@pytest.fixture(scope="session")
def catalog():
    return load_catalog()


@pytest.fixture
def criterion():
    """Record the outcome of one acceptance criterion for the final summary."""
    def record(number, ok, detail=""):
        ACCEPTANCE[number] = (ok, detail)
        print(f"criterion {number}: {'PASS' if ok else 'FAIL'} {detail}".rstrip())
        return ok
    return record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[number]
        terminalreporter.write_line(f"criterion {number}: {'PASS' if ok else 'FAIL'}  {detail}")
