import sys
from pathlib import Path

from hypothesis import HealthCheck, settings

sys.path.insert(0, str(Path(__file__).parent))

settings.register_profile(
    "potbal", deadline=None, derandomize=True, max_examples=60, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("potbal")

import pytest

_ACCEPTANCE_KEY = pytest.StashKey[list]()


def pytest_configure(config):
    config.stash[_ACCEPTANCE_KEY] = []


@pytest.fixture
def record(request):
    """Record one acceptance line; returns ``ok`` so the caller can assert on it."""

    def _record(number: int, title: str, ok: bool, detail: str) -> bool:
        line = f"ACCEPTANCE {number:2d} {'PASS' if ok else 'FAIL'}  {title}: {detail}"
        print(line)
        request.config.stash[_ACCEPTANCE_KEY].append((number, line))
        return ok

    return _record


def pytest_terminal_summary(terminalreporter, config):
    lines = config.stash.get(_ACCEPTANCE_KEY, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for _, line in sorted(lines):
            terminalreporter.write_line(line)
