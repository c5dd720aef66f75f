import pytest

CRITERIA = {
    1: "Laplace power-weight characterization",
    2: "Struve three-way agreement (alpha > 1/2)",
    3: "gluing equivalence sweeps",
    4: "sharp-constant probes",
    5: "Struve function accuracy",
    6: "envelope certification",
    7: "necessity detection",
    8: "pointwise sufficiency estimate",
}

_outcomes = {}
_notes = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n): acceptance criterion exercised by the test")


def _criterion(item):
    mark = item.get_closest_marker("criterion")
    return mark.args[0] if mark else None


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    n = _criterion(item)
    if n is None:
        return
    if rep.when == "call" or (rep.when == "setup" and not rep.passed):
        _outcomes.setdefault(n, []).append(rep.passed)


@pytest.fixture
def note(request):
    """Attach a line of measured detail to the test's acceptance criterion."""
    n = _criterion(request.node)

    def add(text):
        _notes.setdefault(n, []).append(text)

    return add


def pytest_terminal_summary(terminalreporter):
    if not _outcomes:
        return
    terminalreporter.section("acceptance criteria")
    for n, title in CRITERIA.items():
        if n not in _outcomes:
            continue
        status = "PASS" if all(_outcomes[n]) else "FAIL"
        terminalreporter.write_line(f"criterion {n} [{status}] {title}")
        for line in _notes.get(n, []):
            terminalreporter.write_line(f"    {line}")
