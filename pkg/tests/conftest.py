import pytest

_CRITERIA: list[tuple[str, bool, str]] = []


class _Recorder:
    def __call__(self, label: str, passed: bool, detail: str) -> bool:
        _CRITERIA.append((label, bool(passed), detail))
        print(f"{'PASS' if passed else 'FAIL'}  {label}: {detail}")
        return passed


@pytest.fixture
def criterion():
    """Record one acceptance line; returns the pass flag so tests can assert on it."""
    return _Recorder()


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for label, passed, detail in _CRITERIA:
        terminalreporter.write_line(f"{'PASS' if passed else 'FAIL'}  {label}: {detail}")
