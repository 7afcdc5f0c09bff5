import pytest

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def criterion(request):
    """Yields a recorder; the criterion's pass/fail line is printed in the summary."""
    state = {"label": None, "detail": ""}

    def record(label: str, detail: str = ""):
        state["label"] = label
        state["detail"] = detail

    yield record
    if state["label"] is None:
        return
    rep = getattr(request.node, "rep_call", None)
    ok = rep is not None and rep.passed
    line = f"{'PASS' if ok else 'FAIL'}  {state['label']}"
    if state["detail"]:
        line += f"  ({state['detail']})"
    ACCEPTANCE_LINES.append(line)


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
