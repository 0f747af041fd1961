import pytest

_CRITERIA: dict[str, tuple[str, str]] = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    criterion = item.get_closest_marker("criterion")
    if criterion is None:
        return
    key = criterion.args[0]
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        _CRITERIA[key] = (criterion.args[1], "PASS" if report.passed else "FAIL")


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(_CRITERIA, key=int):
        title, verdict = _CRITERIA[key]
        terminalreporter.write_line(f"criterion {int(key):>2}: {verdict}  {title}")
