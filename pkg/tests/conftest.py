import pytest

from ellipot import _backend

ACCEPTANCE_MODULE = "test_acceptance.py"
_acceptance_outcomes = {}
_acceptance_docs = {}


@pytest.fixture(params=_backend.available())
def kernels(request, monkeypatch):
    """Run a test once per available kernel backend."""
    mod = _backend.load(request.param)
    monkeypatch.setattr(_backend, "kernels", mod)
    return mod


def pytest_collection_modifyitems(items):
    for item in items:
        if ACCEPTANCE_MODULE in item.nodeid:
            doc = (getattr(item.function, "__doc__", None) or "").strip().splitlines()
            _acceptance_docs[item.nodeid] = doc[0] if doc else ""


def pytest_runtest_logreport(report):
    if ACCEPTANCE_MODULE not in report.nodeid:
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        _acceptance_outcomes[report.nodeid] = report.outcome


def pytest_terminal_summary(terminalreporter):
    if not _acceptance_outcomes:
        return
    terminalreporter.section("acceptance criteria")
    for nodeid, outcome in sorted(_acceptance_outcomes.items()):
        name = nodeid.split("::")[-1]
        verdict = "PASS" if outcome == "passed" else "FAIL"
        doc = _acceptance_docs.get(nodeid, "")
        terminalreporter.write_line(f"{verdict}  {name}  {doc}".rstrip())
