from __future__ import annotations

import pytest

_VERDICTS = pytest.StashKey[list]()


def pytest_configure(config):
    config.stash[_VERDICTS] = []


@pytest.fixture
def verdict(request):
    """Record one PASS/FAIL line for the terminal summary and echo it."""
    lines = request.config.stash[_VERDICTS]

    def record(number: int, name: str, ok: bool, detail: str = "") -> bool:
        line = f"{'PASS' if ok else 'FAIL'}  criterion {number:>2}  {name}" + (f"  ({detail})" if detail else "")
        lines.append((number, len(lines), line))
        print(line)
        return ok

    return record


def pytest_terminal_summary(terminalreporter, config):
    lines = config.stash.get(_VERDICTS, [])
    if not lines:
        return
    terminalreporter.section("acceptance")
    for _, _, line in sorted(lines):
        terminalreporter.write_line(line)
