import pytest

from virc1.verify import SuiteConfig, run_suite


@pytest.fixture(scope="session")
def default_reports():
    """One run of the default suite, shared by every test that needs it."""
    return run_suite(SuiteConfig())


ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def criterion(request):
    """Yield a recorder; the criterion's PASS/FAIL line is printed whatever the outcome."""
    state = {}

    def record(number, title):
        state["label"] = f"criterion {number:>2}: {title}"

    yield record
    rep = getattr(request.node, "rep_call", None)
    ok = rep is not None and rep.passed
    line = f"{'PASS' if ok else 'FAIL'}  {state.get('label', request.node.name)}"
    ACCEPTANCE_LINES.append(line)
    print(line)


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    if rep.when == "call":
        item.rep_call = rep


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
