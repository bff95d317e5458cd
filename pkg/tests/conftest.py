import pytest

ACCEPTANCE = {}


@pytest.fixture
def criterion(request):
    """Record the outcome of an acceptance criterion for the terminal summary."""
    name = request.node.name
    ACCEPTANCE[name] = "FAIL"
    yield
    rep = getattr(request.node, "rep_call", None)
    if rep is not None and rep.passed:
        ACCEPTANCE[name] = "PASS"


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    if rep.when == "call":
        item.rep_call = rep


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name, status in sorted(ACCEPTANCE.items()):
        terminalreporter.write_line(f"{status}  {name}")
