import pytest

_OUTCOMES = pytest.StashKey[dict]()


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")
    config.stash[_OUTCOMES] = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    number, title = mark.args
    results = item.config.stash[_OUTCOMES]
    prev = results.get(number, (title, "PASS", ""))
    if report.failed:
        detail = report.longreprtext.strip().splitlines()[-1] if report.longreprtext else ""
        results[number] = (title, "FAIL", detail)
    elif report.when == "call" and prev[1] != "FAIL":
        notes = "; ".join(str(v) for k, v in item.user_properties if k == "detail")
        results[number] = (title, "PASS" if report.passed else "SKIP", notes)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    results = config.stash.get(_OUTCOMES, {})
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(results):
        title, status, detail = results[number]
        line = f"criterion {number} [{status}] {title}"
        if detail:
            line += f" -- {detail}"
        terminalreporter.write_line(line)
