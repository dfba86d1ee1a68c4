import time
from contextlib import contextmanager

import pytest

_RESULTS: list[tuple[int, str, str, float, str]] = []


@pytest.fixture
def criterion():
    """Record one acceptance criterion: PASS/FAIL, wall time and budget."""

    @contextmanager
    def record(number: int, title: str, budget_s: float):
        start = time.perf_counter()
        try:
            yield
            elapsed = time.perf_counter() - start
            assert elapsed < budget_s, f"took {elapsed:.2f}s, budget {budget_s}s"
        except BaseException as exc:
            _RESULTS.append((number, title, "FAIL", time.perf_counter() - start, str(exc).splitlines()[0] if str(exc) else type(exc).__name__))
            raise
        _RESULTS.append((number, title, "PASS", elapsed, ""))

    return record


def pytest_terminal_summary(terminalreporter):
    if not _RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number, title, status, elapsed, detail in sorted(_RESULTS):
        line = f"[{status}] {number:>2}. {title} ({elapsed:.2f}s)"
        if detail:
            line += f" -- {detail}"
        terminalreporter.write_line(line)
