"""Shared fixtures and the acceptance-summary reporter.

Acceptance tests record one line per criterion through record_criterion;
the terminal-summary hook prints them after the run so a plain `pytest -v`
shows the per-criterion verdicts in one block.
"""

from random import Random

import pytest

ACCEPTANCE_RESULTS: list[tuple[int, str, str, str]] = []


def record_criterion(num: int, title: str, ok: bool, detail: str = "") -> None:
    ACCEPTANCE_RESULTS.append((num, title, "PASS" if ok else "FAIL", detail))


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for num, title, status, detail in sorted(ACCEPTANCE_RESULTS):
        line = f"criterion {num} [{title}]: {status}"
        if detail:
            line += f" - {detail}"
        terminalreporter.write_line(line)


@pytest.fixture
def rng() -> Random:
    """Fresh deterministic generator per test."""
    return Random(0x5EED)
