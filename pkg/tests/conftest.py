import time
from contextlib import contextmanager

import pytest

_CRITERIA: dict[int, str] = {}


@contextmanager
def _record(number: int, title: str):
    t0 = time.perf_counter()
    try:
        yield
    except BaseException as exc:
        _CRITERIA[number] = f"criterion {number}: FAIL  {title} ({type(exc).__name__}: {str(exc).splitlines()[0] if str(exc) else ''})"
        raise
    _CRITERIA[number] = f"criterion {number}: PASS  {title} [{time.perf_counter() - t0:.1f}s]"


@pytest.fixture
def criterion():
    return _record


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_CRITERIA):
        terminalreporter.write_line(_CRITERIA[n])
