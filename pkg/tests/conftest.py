"""Collects per-criterion outcomes from tests marked ``criterion`` and prints
one PASS/FAIL line per criterion at the end of the run."""
import pytest

_RESULTS: dict[int, dict] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion this test belongs to")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    number, title = marker.args
    entry = _RESULTS.setdefault(number, {"title": title, "ok": True, "notes": []})
    if report.when == "call" or report.outcome != "passed":
        if hasattr(report, "wasxfail"):
            entry["ok"] = False
            entry["notes"].append(f"{item.name}: known failure ({report.wasxfail})")
        elif report.outcome != "passed":
            entry["ok"] = False
            entry["notes"].append(f"{item.name}: {report.outcome}")


def pytest_terminal_summary(terminalreporter):
    if not _RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_RESULTS):
        entry = _RESULTS[number]
        verdict = "PASS" if entry["ok"] else "FAIL"
        terminalreporter.write_line(f"criterion {number:2d} {verdict}  {entry['title']}")
        for note in entry["notes"]:
            terminalreporter.write_line(f"              {note}")
