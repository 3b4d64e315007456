from __future__ import annotations

import functools
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from kcplan import fixtures  # noqa: E402

GOLDEN = Path(__file__).parent / "golden"


@functools.lru_cache(maxsize=None)
def problem(name: str, plan_length: int | None = None):
    return fixtures.load(name, plan_length=plan_length)


@pytest.fixture
def load():
    return problem


@pytest.fixture
def golden():
    return GOLDEN


def pytest_terminal_summary(terminalreporter):
    acc = sys.modules.get("test_acceptance")
    if acc is None or not acc.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(acc.RESULTS):
        terminalreporter.write_line(acc.line(n))
