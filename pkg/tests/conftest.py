import pytest

_KEY = pytest.StashKey[dict]()


class AcceptanceLog:
    def __init__(self, store: dict):
        self._store = store

    def record(self, number: int, title: str, passed: bool, detail: str) -> None:
        self._store[number] = (title, bool(passed), detail)


def pytest_configure(config):
    config.stash[_KEY] = {}


@pytest.fixture
def acceptance(request):
    return AcceptanceLog(request.config.stash[_KEY])


def pytest_terminal_summary(terminalreporter, config):
    results = config.stash.get(_KEY, {})
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(results):
        title, passed, detail = results[number]
        terminalreporter.write_line(f"criterion {number:2d} {'PASS' if passed else 'FAIL'}  {title}: {detail}")
