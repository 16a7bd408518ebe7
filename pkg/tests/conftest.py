from __future__ import annotations

import sys

import pytest

from ldcrit.suite import corpus_store


@pytest.fixture(scope="session")
def corpus():
    """(store, results) of the fully checked bundled corpus."""
    return corpus_store()


def pytest_terminal_summary(terminalreporter):
    mod = next((m for name, m in sys.modules.items() if name.endswith("test_acceptance")), None)
    lines = getattr(mod, "LINES", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
