import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from coxjsj.corpus import fuzz_corpus, named_corpus  # noqa: E402

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(scope="session")
def corpus():
    return named_corpus()


@pytest.fixture(scope="session")
def small_fuzz():
    """Small graphs with short branches, so that brute-force oracles stay cheap."""
    return fuzz_corpus(60, seed=5, max_vertices=12, interior_choices=(0, 1, 1, 2))


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
