import pytest

from ckdyn import corpus

# outcome per acceptance criterion, filled while the acceptance tests run
_criteria: dict[str, dict] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(label, title): acceptance criterion covered by the test")


def pytest_collection_modifyitems(items):
    for item in items:
        m = item.get_closest_marker("criterion")
        if m:
            label, title = m.args
            _criteria[item.nodeid] = {"label": label, "title": title, "outcome": None}


def pytest_runtest_logreport(report):
    entry = _criteria.get(report.nodeid)
    if entry is None:
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        entry["outcome"] = "PASS" if report.outcome == "passed" else "FAIL"


def pytest_terminal_summary(terminalreporter):
    ran = [e for e in _criteria.values() if e["outcome"]]
    if not ran:
        return
    terminalreporter.section("acceptance criteria")
    for e in ran:
        terminalreporter.write_line(f"{e['outcome']} criterion {e['label']}: {e['title']}")


@pytest.fixture(scope="session")
def graphs():
    return corpus.graphs()


@pytest.fixture(scope="session")
def systems():
    return corpus.systems()
