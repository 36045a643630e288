import pytest

from commute_frontier import builtin_table

_criteria: dict[str, str] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n, title): acceptance criterion check")


@pytest.fixture(scope="session")
def table():
    return builtin_table()


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.outcome != "passed"):
        return
    title = getattr(report, "criterion_title", None)
    if title is not None:
        _criteria[title] = "PASS" if report.passed else "FAIL"


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is not None:
        n, title = mark.args
        rep.criterion_title = f"criterion {n}: {title}"


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for title in sorted(_criteria, key=lambda t: int(t.split()[1].rstrip(":"))):
        terminalreporter.write_line(f"{_criteria[title]}  {title}")
