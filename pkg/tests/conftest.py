from pathlib import Path

import pytest

from cnl4.matrix import preset_matrix

FIXTURES = Path(__file__).parent / "fixtures"

# (criterion, description, passed, detail) rows filled in by test_acceptance
ACCEPTANCE_RESULTS: list[tuple[str, str, bool, str]] = []


@pytest.fixture(scope="session")
def q4():
    return preset_matrix("4q")


@pytest.fixture(scope="session")
def lq4():
    return preset_matrix("4lq")


@pytest.fixture
def fixtures_dir():
    return FIXTURES


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for crit, desc, ok, detail in sorted(ACCEPTANCE_RESULTS, key=lambda r: r[0]):
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] {crit:<12} {desc}: {detail}")
