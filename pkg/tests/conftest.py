import sys
import time
from contextlib import contextmanager
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

_RESULTS: dict[int, str] = {}


@contextmanager
def _criterion(number: int, title: str, limit_s: float):
    """Time the body, enforce the runtime limit and record one status line."""
    start = time.perf_counter()
    try:
        yield
        elapsed = time.perf_counter() - start
        assert elapsed < limit_s, f"took {elapsed:.2f} s, limit {limit_s} s"
    except BaseException as exc:
        elapsed = time.perf_counter() - start
        line = f"criterion {number}: FAIL  {title} ({elapsed:.2f} s) -- {str(exc).splitlines()[0] if str(exc) else type(exc).__name__}"
        _RESULTS[number] = line
        print(line)
        raise
    line = f"criterion {number}: PASS  {title} ({elapsed:.2f} s)"
    _RESULTS[number] = line
    print(line)


@pytest.fixture
def criterion():
    return _criterion


def pytest_terminal_summary(terminalreporter):
    if not _RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_RESULTS):
        terminalreporter.write_line(_RESULTS[n])
