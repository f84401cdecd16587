import pytest

_LINES = pytest.StashKey[list]()


def pytest_configure(config):
    config.stash[_LINES] = []


@pytest.fixture
def report(request):
    """report(n, ok, detail): record one acceptance line and print it."""
    lines = request.config.stash[_LINES]

    def record(n, ok, detail):
        tag = {True: "PASS", False: "FAIL", None: "EXCLUDED"}[ok]
        line = f"[{tag}] criterion {n}: {detail}"
        lines.append((n, line))
        print(line)
        return ok
    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash.get(_LINES, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for _, line in sorted(lines, key=lambda x: x[0]):
            terminalreporter.write_line(line)
