import pytest
from hypothesis import settings

settings.register_profile("suite", deadline=None, max_examples=50)
settings.load_profile("suite")

# Ordered record of acceptance-criterion outcomes, printed as a summary block
# so a full run ends with one PASS/FAIL line per criterion.
_acceptance_results = {}


def pytest_configure(config):
    config.addinivalue_line(
        "markers",
        "acceptance(criterion): end-to-end acceptance check, reported in the summary block",
    )


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    if report.when != "call":
        return
    marker = item.get_closest_marker("acceptance")
    if marker is not None:
        _acceptance_results[marker.args[0]] = report.passed


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _acceptance_results:
        return
    terminalreporter.section("acceptance criteria")
    for criterion, passed in _acceptance_results.items():
        verdict = "PASS" if passed else "FAIL"
        terminalreporter.write_line(f"  {verdict}  {criterion}")
